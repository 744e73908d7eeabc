#include "vfrac/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vfrac {

ExponentField2 ExponentField2::constant(double value) {
  return {[value](const Point&, const Point&) { return value; }, value, value};
}

ExponentField2 ExponentField2::symmetrized(std::function<double(const Point&, const Point&)> g,
                                           double declared_min, double declared_max) {
  auto sym = [g = std::move(g)](const Point& x, const Point& y) {
    return 0.5 * (g(x, y) + g(y, x));
  };
  return {std::move(sym), declared_min, declared_max};
}

ExponentField2 ExponentField2::raw(std::function<double(const Point&, const Point&)> g,
                                   double declared_min, double declared_max) {
  return {std::move(g), declared_min, declared_max};
}

ExponentField1 ExponentField1::constant(double value) {
  return {[value](const Point&) { return value; }, value, value};
}

ExponentField1 ExponentField1::from(std::function<double(const Point&)> g, double declared_min,
                                    double declared_max) {
  return {std::move(g), declared_min, declared_max};
}

const char* to_string(SignMode mode) {
  return mode == SignMode::odd_power ? "odd" : "positive";
}

bool NonlinearitySpec::all_positive_part() const {
  return std::all_of(terms.begin(), terms.end(),
                     [](const PowerTerm& t) { return t.mode == SignMode::positive_part; });
}

const HypothesisCheck& HypothesisReport::at(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw Error(ErrorKind::configuration, "no hypothesis named " + name);
}

double critical_exponent(const ProblemSpec& spec, const Point& x) {
  const double n = spec.dimension;
  const double q = spec.p(x, x);
  const double sq = spec.s(x, x) * q;
  const double denom = n - sq;
  if (!(denom > 0.0))
    throw Error(ErrorKind::domain, "critical exponent undefined: s(x,x) p(x,x) >= n",
                format_point(x, spec.dimension));
  return n * q / denom;
}

NonlinearityValue evaluate_nonlinearity(const ProblemSpec& spec, const Point& x, double t) {
  NonlinearityValue out;
  if (t == 0.0) return out;
  for (const PowerTerm& term : spec.nonlinearity.terms) {
    if (term.mode == SignMode::positive_part && t <= 0.0) continue;
    const double c = term.coefficient(x);
    const double rho = term.exponent(x);
    out.f += c * signed_power(t, rho);
    out.F += c * abs_power(t, rho) / rho;
  }
  return out;
}

double nonlinearity_derivative(const ProblemSpec& spec, const Point& x, double t) {
  double df = 0.0;
  for (const PowerTerm& term : spec.nonlinearity.terms) {
    if (term.mode == SignMode::positive_part && t <= 0.0) continue;
    const double c = term.coefficient(x);
    const double rho = term.exponent(x);
    if (rho == 2.0) {
      df += c;
      continue;
    }
    const double a = std::max(std::abs(t), 1e-12);
    df += c * (rho - 1.0) * std::pow(a, rho - 2.0);
  }
  return df;
}

namespace {

struct Samples {
  std::vector<Point> points;                   // in the closed box
  std::vector<std::pair<Point, Point>> pairs;  // in the closed box squared
};

Point map_to_box(const Box& box, const Eigen::Vector4d& u, int offset) {
  Point x = Point::Zero();
  for (int k = 0; k < box.dimension; ++k) x[k] = box.lo[k] + u[offset + k] * box.side(k);
  return x;
}

std::vector<Point> box_corners(const Box& box) {
  std::vector<Point> out;
  const int count = 1 << box.dimension;
  for (int mask = count - 1; mask >= 0; --mask) {
    Point x = Point::Zero();
    for (int k = 0; k < box.dimension; ++k) x[k] = (mask >> k) & 1 ? box.hi[k] : box.lo[k];
    out.push_back(x);
  }
  return out;
}

Samples make_samples(const Box& box, int count) {
  Samples s;
  s.points = box_corners(box);
  s.points.push_back(box.center());
  for (const Point& a : box_corners(box))
    for (const Point& b : box_corners(box)) s.pairs.emplace_back(a, b);
  HaltonSequence h1(box.dimension), h2(2 * box.dimension);
  for (int i = 0; i < count; ++i) {
    const Point x = map_to_box(box, h1.next(), 0);
    s.points.push_back(x);
    const Eigen::Vector4d u = h2.next();
    s.pairs.emplace_back(map_to_box(box, u, 0), map_to_box(box, u, box.dimension));
  }
  for (const Point& x : s.points) s.pairs.emplace_back(x, x);
  return s;
}

class Sampler {
public:
  explicit Sampler(const ProblemSpec& spec) : spec_(spec) {}

  double eval(const ExponentField2& f, const char* name, const Point& x, const Point& y) const {
    const double v = f(x, y);
    if (std::isnan(v))
      throw Error(ErrorKind::evaluator, std::string("field ") + name + " returned NaN",
                  format_point(x, spec_.dimension) + " " + format_point(y, spec_.dimension));
    check_declared(v, f.declared_min, f.declared_max, name, x, &y);
    return v;
  }

  double eval(const ExponentField1& f, const char* name, const Point& x) const {
    const double v = f(x);
    if (std::isnan(v))
      throw Error(ErrorKind::evaluator, std::string("field ") + name + " returned NaN",
                  format_point(x, spec_.dimension));
    check_declared(v, f.declared_min, f.declared_max, name, x, nullptr);
    return v;
  }

  double eval_plain(const std::function<double(const Point&)>& f, const char* name,
                    const Point& x) const {
    const double v = f(x);
    if (std::isnan(v))
      throw Error(ErrorKind::evaluator, std::string("field ") + name + " returned NaN",
                  format_point(x, spec_.dimension));
    return v;
  }

private:
  void check_declared(double v, double lo, double hi, const char* name, const Point& x,
                      const Point* y) const {
    const double slack = 1e-12 * (1.0 + std::abs(v));
    if (v < lo - slack || v > hi + slack) {
      std::string where = format_point(x, spec_.dimension);
      if (y) where += " " + format_point(*y, spec_.dimension);
      throw Error(ErrorKind::configuration,
                  std::string("field ") + name + " = " + std::to_string(v) +
                      " escapes its declared bounds [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]",
                  where);
    }
  }

  const ProblemSpec& spec_;
};

HypothesisCheck make_check(std::string name, double margin, bool passed, std::string detail = {}) {
  HypothesisCheck c;
  c.name = std::move(name);
  c.worst_margin = margin;
  c.passed = passed;
  c.detail = std::move(detail);
  return c;
}

HypothesisCheck symmetry_check(const char* label, const ExponentField2& f, const char* field_name,
                               const Samples& samples, const Sampler& sampler) {
  // max of f(x,y) - f(y,x) over the sampled pairs
  double worst = -std::numeric_limits<double>::infinity();
  std::pair<Point, Point> witness;
  double tol = 0.0;
  for (const auto& [x, y] : samples.pairs) {
    const double a = sampler.eval(f, field_name, x, y);
    const double b = sampler.eval(f, field_name, y, x);
    tol = std::max(tol, 1e-12 * (1.0 + std::abs(a)));
    if (a - b > worst) {
      worst = a - b;
      witness = {x, y};
    }
  }
  auto c = make_check(label, -worst, worst <= tol, std::string(field_name) + " symmetry");
  if (worst > tol) c.witness = witness;
  return c;
}

}  // namespace

HypothesisReport validate_hypotheses(const ProblemSpec& spec, int sample_count) {
  if (spec.dimension != 1 && spec.dimension != 2)
    throw Error(ErrorKind::configuration, "dimension must be 1 or 2");
  if (spec.omega.dimension != spec.dimension)
    throw Error(ErrorKind::configuration, "omega dimension does not match problem dimension");
  for (int k = 0; k < spec.dimension; ++k)
    if (!(spec.omega.side(k) > 0.0))
      throw Error(ErrorKind::configuration, "omega must have positive side lengths");
  if (!spec.s.evaluator || !spec.p.evaluator || !spec.alpha.evaluator || !spec.r.evaluator)
    throw Error(ErrorKind::configuration, "field without evaluator");
  for (const auto& t : spec.nonlinearity.terms)
    if (!t.coefficient || !t.exponent.evaluator)
      throw Error(ErrorKind::configuration, "nonlinearity term without evaluator");
  if (sample_count < 1) throw Error(ErrorKind::configuration, "sample_count must be positive");

  const int n = spec.dimension;
  const Samples samples = make_samples(spec.omega, sample_count);
  const Sampler sampler(spec);
  const auto& nl = spec.nonlinearity;

  HypothesisReport report;
  report.sample_count = static_cast<int>(samples.pairs.size());

  // (S1), (P1)
  report.checks.push_back(symmetry_check("S1", spec.s, "s", samples, sampler));

  // (S2): 0 < s- <= s <= s+ < 1, checked on declared bounds; samples are
  // bound-checked by the sampler.
  for (const auto& [x, y] : samples.pairs) sampler.eval(spec.s, "s", x, y);
  {
    const double m = std::min(spec.s.declared_min, 1.0 - spec.s.declared_max);
    report.checks.push_back(make_check("S2", m, m > 0.0, "0 < s- <= s+ < 1"));
  }
  report.checks.push_back(symmetry_check("P1", spec.p, "p", samples, sampler));
  for (const auto& [x, y] : samples.pairs) sampler.eval(spec.p, "p", x, y);
  {
    const double m = spec.p.declared_min - 1.0;
    const bool ok = m > 0.0 && std::isfinite(spec.p.declared_max) &&
                    spec.p.declared_min <= spec.p.declared_max;
    report.checks.push_back(make_check("P2", m, ok, "1 < p- <= p+ < inf"));
  }

  // s(x,y) p(x,y) < n, strict.
  {
    double worst = -std::numeric_limits<double>::infinity();
    std::pair<Point, Point> witness;
    for (const auto& [x, y] : samples.pairs) {
      const double sp = sampler.eval(spec.s, "s", x, y) * sampler.eval(spec.p, "p", x, y);
      if (sp > worst) {
        worst = sp;
        witness = {x, y};
      }
    }
    auto c = make_check("sp<n", n - worst, worst < n, "max s p = " + std::to_string(worst));
    if (!(worst < n)) c.witness = witness;
    report.checks.push_back(c);
  }

  // alpha, r and the term exponents belong to C+.
  {
    double m = std::min(spec.alpha.declared_min, spec.r.declared_min) - 1.0;
    for (const auto& t : nl.terms) m = std::min(m, t.exponent.declared_min - 1.0);
    for (const Point& x : samples.points) {
      sampler.eval(spec.alpha, "alpha", x);
      sampler.eval(spec.r, "r", x);
      for (const auto& t : nl.terms) sampler.eval(t.exponent, "term exponent", x);
    }
    const bool finite = std::isfinite(spec.alpha.declared_max) && std::isfinite(spec.r.declared_max);
    report.checks.push_back(make_check("C+", m, m > 0.0 && finite, "alpha, r, term exponents in C+"));
  }

  const bool subcritical_ok = report.at("sp<n").passed;
  double min_crit = std::numeric_limits<double>::infinity();
  if (subcritical_ok)
    for (const Point& x : samples.points) min_crit = std::min(min_crit, critical_exponent(spec, x));
  report.min_critical_exponent = min_crit;

  // Growth: |f(x,t)| <= M |t|^{r(x)-1} for all t. For a power family this holds
  // iff every active term has rho_k(x) = r(x) and sum_k |c_k(x)| <= M, and the
  // growth must be subcritical, r(x) < p_s*(x).
  {
    double worst = std::numeric_limits<double>::infinity();
    std::optional<Point> witness;
    std::string why = "growth bound";
    for (const Point& x : samples.points) {
      const double r = sampler.eval(spec.r, "r", x);
      double csum = 0.0;
      for (const auto& t : nl.terms) {
        const double c = sampler.eval_plain(t.coefficient, "term coefficient", x);
        const double rho = sampler.eval(t.exponent, "term exponent", x);
        csum += std::abs(c);
        if (c != 0.0) {
          const double gap = -std::abs(rho - r);
          if (gap < -1e-12 && gap < worst) {
            worst = gap;
            witness = x;
            why = "term exponent differs from r where the coefficient is nonzero";
          }
        }
      }
      const double m = nl.growth_bound - csum;
      if (m < worst) {
        worst = m;
        witness = x;
        why = "sum |c_k| exceeds M";
      }
      if (subcritical_ok) {
        const double mc = critical_exponent(spec, x) - r;
        if (mc <= 0.0 && mc < worst) {
          worst = mc;
          witness = x;
          why = "r(x) >= p_s*(x)";
        }
      }
    }
    const bool ok = nl.growth_bound > 0.0 && worst >= -1e-12 && subcritical_ok;
    auto c = make_check("F1", worst, ok, why);
    if (!ok && witness) c.witness = std::make_pair(*witness, *witness);
    report.checks.push_back(c);
  }

  // Sign: f(x,t) >= 0 on [0, t*].
  {
    double worst = std::numeric_limits<double>::infinity();
    std::optional<Point> witness;
    for (const Point& x : samples.points)
      for (int j = 1; j <= 16; ++j) {
        const double t = nl.t_star * j / 16.0;
        const double f = evaluate_nonlinearity(spec, x, t).f;
        if (f < worst) {
          worst = f;
          witness = x;
        }
      }
    const bool ok = nl.t_star > 0.0 && worst >= 0.0;
    auto c = make_check("F2", worst, ok, "f >= 0 on [0, t*]");
    if (!ok && witness) c.witness = std::make_pair(*witness, *witness);
    report.checks.push_back(c);
  }

  // Ambrosetti-Rabinowitz: 0 < b F(x,t) <= t f(x,t) for |t| > a, b > p+.
  {
    const bool one_sided = !nl.terms.empty() && nl.all_positive_part();
    double worst = std::numeric_limits<double>::infinity();
    std::optional<Point> witness;
    for (const Point& x : samples.points)
      for (int j = 0; j <= 15; ++j) {
        const double t = nl.ar_a * (1.0 + 1e-6) * std::pow(1000.0, j / 15.0);
        for (double sign : {1.0, -1.0}) {
          if (sign < 0 && one_sided) continue;
          const auto v = evaluate_nonlinearity(spec, x, sign * t);
          const double bF = nl.ar_b * v.F;
          const double tf = sign * t * v.f;
          const double scale = std::max(1.0, std::abs(tf));
          const double m = std::min(bF, tf - bF + 1e-12 * scale) / scale;
          if (m < worst) {
            worst = m;
            witness = x;
          }
        }
      }
    const double bgap = nl.ar_b - spec.p.declared_max;
    const bool ok = nl.ar_a > 0.0 && bgap > 0.0 && worst > 0.0;
    auto c = make_check("F3", std::min(worst, bgap), ok, "0 < bF <= tf for |t| > a, b > p+");
    if (!ok && witness) c.witness = std::make_pair(*witness, *witness);
    report.checks.push_back(c);
  }

  // (A1): alpha+ < p-.
  {
    const double m = spec.p.declared_min - spec.alpha.declared_max;
    report.checks.push_back(make_check("A1", m, m > 0.0, "alpha+ < p-"));
  }

  // (A2): alpha(x) <= p(x,x).
  {
    double worst = std::numeric_limits<double>::infinity();
    std::optional<Point> witness;
    for (const Point& x : samples.points) {
      const double m = sampler.eval(spec.p, "p", x, x) - sampler.eval(spec.alpha, "alpha", x);
      if (m < worst) {
        worst = m;
        witness = x;
      }
    }
    auto c = make_check("A2", worst, worst >= 0.0, "alpha(x) <= p(x,x)");
    if (worst < 0.0 && witness) c.witness = std::make_pair(*witness, *witness);
    report.checks.push_back(c);
  }

  {
    const double m = spec.r.declared_min - spec.p.declared_max;
    report.checks.push_back(make_check("p+<r-", m, m > 0.0, "p+ < r-"));
  }
  {
    const double m = std::min(spec.r.declared_max - spec.p.declared_max,
                              min_crit - spec.r.declared_max);
    const bool ok = spec.p.declared_max <= spec.r.declared_max && spec.r.declared_max < min_crit;
    report.checks.push_back(make_check("regularity", m, ok, "p+ <= r+ < inf p_s*"));
  }

  auto pass = [&](const char* name) { return report.at(name).passed; };
  report.admissible = pass("S1") && pass("S2") && pass("P1") && pass("P2") && pass("sp<n") && pass("C+");
  report.multiplicity_eligible = report.admissible && pass("F1") && pass("F2") && pass("F3") &&
                                 pass("A1") && pass("p+<r-");
  report.regularity_eligible = report.multiplicity_eligible && pass("regularity") && pass("A2");
  return report;
}

}  // namespace vfrac

#include "vfrac/analysis.hpp"

#include <algorithm>
#include <sstream>

namespace vfrac {

using Index = Eigen::Index;

namespace {

std::string tuple_text(std::initializer_list<std::pair<const char*, double>> items) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [k, v] : items) {
    os << (first ? "" : ", ") << k << " = " << v;
    first = false;
  }
  return os.str();
}

constexpr double kSlack = 1e-12;

}  // namespace

void InequalityReport::record(double lhs, double rhs, double slack, const std::string& input) {
  ++samples;
  const double scale = std::abs(lhs) + std::abs(rhs);
  const double margin = rhs - lhs;
  const double relative = scale > 0.0 ? margin / scale : 0.0;
  if (!std::isfinite(lhs) || !std::isfinite(rhs) || margin < -slack * scale) {
    if (violations == 0) witness = input;
    ++violations;
  }
  if (relative < worst_margin || !std::isfinite(relative)) {
    worst_margin = relative;
    if (violations == 0) witness = input;
  }
}

void InequalityReport::merge(const InequalityReport& other) {
  samples += other.samples;
  if (other.violations > 0 && violations == 0) witness = other.witness;
  violations += other.violations;
  if (other.worst_margin < worst_margin) {
    worst_margin = other.worst_margin;
    if (violations == 0) witness = other.witness;
  }
}

InequalityReport simon_suite(long samples, std::uint64_t seed) {
  InequalityReport r;
  r.name = "simon";
  UniformStream rng(seed);
  for (long k = 0; k < samples; ++k) {
    const double p = k % 2 == 0 ? rng.next(1.0 + 1e-3, 2.0) : rng.next(2.0, 6.0);
    const double x = rng.next(-10.0, 10.0);
    // every fourth sample puts y close to x
    const double y = k % 4 == 3 ? x + rng.next(-1e-3, 1e-3) : rng.next(-10.0, 10.0);
    const Sides<double> s = simon_sides(x, y, p);
    r.record(s.lhs, s.rhs, kSlack, tuple_text({{"x", x}, {"y", y}, {"p", p}}));
  }
  return r;
}

InequalityReport truncation_suite(long samples, std::uint64_t seed) {
  InequalityReport r;
  r.name = "truncation";
  UniformStream rng(seed);
  for (long k = 0; k < samples; ++k) {
    const double a = rng.next(0.0, 10.0);
    const double b = rng.next(0.0, 10.0);
    const double m = rng.next(0.0, 10.0);
    const double kappa = rng.next(1.0, 6.0);
    const double p = rng.next(1.0 + 1e-3, 6.0);
    const Sides<double> s = truncation_sides(a, b, m, kappa, p);
    r.record(s.lhs, s.rhs, kSlack, tuple_text({{"a", a}, {"b", b}, {"m", m}, {"kappa", kappa}, {"p", p}}));
  }
  return r;
}

InequalityReport power_comparison_suite(long samples, std::uint64_t seed) {
  InequalityReport r;
  r.name = "power_comparison";
  UniformStream rng(seed);
  for (long k = 0; k < samples; ++k) {
    const double ux = 1.0 + rng.next(1e-9, 99.0);
    const double uy = 1.0 + rng.next(1e-9, 99.0);
    const double eta = rng.next(0.0, 5.0);
    const double eta0 = rng.next(0.0, eta);
    const Sides<double> s = power_comparison_sides(ux, uy, eta, eta0);
    r.record(s.lhs, s.rhs, kSlack, tuple_text({{"ux", ux}, {"uy", uy}, {"eta", eta}, {"eta0", eta0}}));
  }
  return r;
}

std::pair<double, double> grid_exponent_range(const DiscreteDomain& d) {
  double lo = d.diagonal_exponent.minCoeff(), hi = d.diagonal_exponent.maxCoeff();
  const Index N = d.size();
  for (Index i = 0; i < N; ++i)
    for (Index j = i + 1; j < N; ++j) {
      lo = std::min(lo, d.interior_exponents(i, j));
      hi = std::max(hi, d.interior_exponents(i, j));
    }
  for (const CollarPartner& c : d.collar_partners) {
    lo = std::min(lo, c.exponent);
    hi = std::max(hi, c.exponent);
  }
  return {lo, hi};
}

InequalityReport check_norm_modular_interplay(const GridFunction& u, const ProblemSpec& spec,
                                              const DiscreteDomain& domain, double tol) {
  InequalityReport r;
  r.name = "norm_modular_interplay";
  if (u.isZero(0.0)) throw Error(ErrorKind::domain, "norm-modular interplay needs u != 0");
  const double norm = x0_norm(u, spec, domain).norm;
  const double rho = gagliardo_modular(u, spec, domain);
  const auto [pmin, pmax] = grid_exponent_range(domain);
  const std::string input = tuple_text({{"norm", norm}, {"rho", rho}, {"p-", pmin}, {"p+", pmax}});
  if (std::abs(norm - 1.0) <= tol) {
    r.record(std::abs(rho - 1.0), tol, 0.0, input);
  } else if (norm > 1.0) {
    r.record(std::pow(norm, pmin), rho, tol, input);
    r.record(rho, std::pow(norm, pmax), tol, input);
  } else {
    r.record(std::pow(norm, pmax), rho, tol, input);
    r.record(rho, std::pow(norm, pmin), tol, input);
  }
  return r;
}

namespace {

/// grad Phi(v) / (grad Phi(v) . v): the gradient of log N at u, v = u / N.
GridFunction log_norm_gradient(const GridFunction& grad_phi, const GridFunction& v) {
  return grad_phi / grad_phi.dot(v);
}

struct RatioEval {
  double ratio = 0.0;
  GridFunction grad;  // of log ratio
};

}  // namespace

EmbeddingEstimate estimate_embedding_constant(const ProblemSpec& spec, const DiscreteDomain& domain,
                                              const ExponentField1& beta, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::configuration, "at least one trial required");
  const Eigen::VectorXd b = sample(domain, beta.evaluator);
  for (Index i = 0; i < domain.size(); ++i) {
    const Point& x = domain.interior_nodes[static_cast<std::size_t>(i)];
    if (!(b[i] >= 1.0 && b[i] < critical_exponent(spec, x)))
      throw Error(ErrorKind::domain, "embedding needs 1 <= beta < p_s*", format_point(x, domain.dimension));
  }

  auto evaluate = [&](const GridFunction& u) {
    RatioEval out;
    const double nb = luxemburg_norm(u, b, domain).norm;
    const double nx = x0_norm(u, spec, domain).norm;
    out.ratio = nb / nx;
    const GridFunction vb = u / nb, vx = u / nx;
    GridFunction gb(u.size());
    for (Index i = 0; i < u.size(); ++i) gb[i] = domain.cell_measure * b[i] * signed_power(vb[i], b[i]);
    out.grad = log_norm_gradient(gb, vb) - log_norm_gradient(gagliardo_modular_gradient(vx, spec, domain), vx);
    return out;
  };
  auto unit = [&](const GridFunction& u) -> GridFunction { return u / x0_norm(u, spec, domain).norm; };

  EmbeddingEstimate est;
  est.trials = trials;
  UniformStream rng(seed);
  const Box& box = domain.omega;
  for (int t = 0; t < trials; ++t) {
    Point c = Point::Zero();
    for (int a = 0; a < domain.dimension; ++a) c[a] = rng.next(box.lo[a], box.hi[a]);
    const double sigma = box.side(0) * std::exp(rng.next(std::log(0.02), std::log(0.5)));
    const double sign_flip = rng.next() < 0.2 ? -1.0 : 1.0;
    GridFunction u = sample(domain, [&](const Point& x) {
      return std::exp(-(x - c).squaredNorm() / (2.0 * sigma * sigma));
    });
    if (sign_flip < 0.0) u[static_cast<Index>(rng.next() * static_cast<double>(u.size()))] *= -1.0;
    if (!(u.cwiseAbs().maxCoeff() > 1e-200)) u.setOnes();
    u = unit(u);
    RatioEval cur = evaluate(u);
    double step = 0.1;
    for (int k = 0; k < 50; ++k) {
      const double gn = cur.grad.norm();
      if (!(gn > 0.0) || !std::isfinite(gn)) break;
      const GridFunction trial = unit(u + (step / gn) * u.norm() * cur.grad);
      const RatioEval next = evaluate(trial);
      if (next.ratio > cur.ratio) {
        u = trial;
        cur = next;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    if (cur.ratio > est.sup_ratio) {
      est.sup_ratio = cur.ratio;
      est.maximizer = u;
    }
    est.running_sup.push_back(est.sup_ratio);
  }
  return est;
}

double scaled_lq_norm(const GridFunction& u, double q, const DiscreteDomain& domain) {
  const double L = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
  if (L == 0.0) return 0.0;
  std::vector<double> terms(static_cast<std::size_t>(u.size()));
  for (Index i = 0; i < u.size(); ++i) terms[static_cast<std::size_t>(i)] = std::pow(std::abs(u[i]) / L, q);
  return L * std::pow(domain.cell_measure * tree_sum(terms), 1.0 / q);
}

BootstrapReport bootstrap_linf(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& domain,
                               const BootstrapConfig& config) {
  if (u.size() != domain.size()) throw Error(ErrorKind::configuration, "grid function does not match the grid");
  BootstrapReport rep;
  const auto [pmin, pmax] = grid_exponent_range(domain);
  (void)pmax;
  rep.p_minus = pmin;
  double rplus = 0.0, crit = std::numeric_limits<double>::infinity();
  for (const Point& x : domain.interior_nodes) {
    rplus = std::max(rplus, spec.r(x));
    crit = std::min(crit, critical_exponent(spec, x));
  }
  rep.r_plus = rplus;
  if (config.theta) {
    double tmin = std::numeric_limits<double>::infinity();
    for (const Point& x : domain.interior_nodes) tmin = std::min(tmin, (*config.theta)(x));
    rep.theta_minus = tmin;
  } else {
    rep.theta_minus = 0.5 * (rplus + crit);
  }
  if (!(rep.theta_minus > rep.r_plus))
    throw Error(ErrorKind::configuration, "bootstrap needs theta- > r+");

  const GridFunction a = u.cwiseAbs();
  rep.linf = a.size() ? a.maxCoeff() : 0.0;
  rep.trivial = rep.linf <= 1.0;
  const double ratio = rep.theta_minus / rep.r_plus;
  const double power = rep.r_plus / rep.p_minus;
  const double measure = domain.omega.measure();

  rep.base_norm = scaled_lq_norm(a, rep.theta_minus, domain);
  double gamma = 1.0;
  for (int m = 1; m <= config.max_steps; ++m) {
    gamma *= ratio;
    const double q = gamma * rep.theta_minus;
    if (q > config.exponent_cap) break;
    rep.gammas.push_back(gamma);
    rep.exponents.push_back(q);
    rep.norms.push_back(scaled_lq_norm(a, q, domain));
  }

  rep.bound_chain_ok = !rep.norms.empty();
  rep.ladder_monotone = true;
  double prev = rep.base_norm, prev_q = rep.theta_minus;
  for (std::size_t k = 0; k < rep.norms.size(); ++k) {
    const double g = rep.gammas[k];
    const double tail = std::pow(std::pow(g, 1.0 / g), power) * std::pow(prev, power);
    if (k == 0) rep.constant = std::pow(rep.norms[0] / tail, g);
    const double bound = std::pow(rep.constant, 1.0 / g) * tail;
    rep.bounds.push_back(bound);
    if (!(rep.norms[k] <= bound * (1.0 + 1e-12))) rep.bound_chain_ok = false;
    const double q = rep.exponents[k];
    const double now = rep.norms[k] / std::pow(measure, 1.0 / q);
    const double before = prev / std::pow(measure, 1.0 / prev_q);
    if (now < before * (1.0 - 1e-12)) rep.ladder_monotone = false;
    prev = rep.norms[k];
    prev_q = q;
  }
  return rep;
}

}  // namespace vfrac

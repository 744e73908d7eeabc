#include "vfrac/nonlocal.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace vfrac {

namespace {

using Index = Eigen::Index;

const Point& node(const DiscreteDomain& d, Index i) {
  return d.interior_nodes[static_cast<std::size_t>(i)];
}

void check_inputs(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& domain) {
  if (spec.dimension != domain.dimension)
    throw Error(ErrorKind::configuration, "problem and grid dimensions differ");
  if (u.size() != domain.size())
    throw Error(ErrorKind::configuration,
                "grid function has " + std::to_string(u.size()) + " entries, grid has " +
                    std::to_string(domain.size()) + " interior nodes");
  if (!u.allFinite()) throw Error(ErrorKind::numeric, "grid function has non-finite entries");
}

/// (e-1)|t|^{e-2}, the derivative of |t|^{e-2} t.
double power_slope(double t, double e) {
  if (e == 2.0) return 1.0;
  const double a = std::max(std::abs(t), 1e-12);
  return (e - 1.0) * std::pow(a, e - 2.0);
}

double finite_sum(std::vector<double>& terms, const char* what, const DiscreteDomain& d) {
  const double v = tree_sum(terms);
  if (!std::isfinite(v)) {
    for (std::size_t k = 0; k < terms.size(); ++k)
      if (!std::isfinite(terms[k]))
        throw Error(ErrorKind::numeric, std::string(what) + " overflow",
                    "term " + std::to_string(k) + " of " + std::to_string(terms.size()) +
                        ", h = " + std::to_string(d.h));
    throw Error(ErrorKind::numeric, std::string(what) + " overflow");
  }
  return v;
}

/// Calls visit(i, j, w, p) for interior pairs (j >= 0) and visit(i, -1, w, p)
/// for collar partners, in a fixed order.
template <typename Visit>
void for_each_pair(const DiscreteDomain& d, Visit&& visit) {
  const Index N = d.size();
  for (Index i = 0; i < N; ++i)
    for (Index j = i + 1; j < N; ++j) visit(i, j, d.interior_weights(i, j), d.interior_exponents(i, j));
  for (Index i = 0; i < N; ++i)
    for (Index k = d.collar_offsets[static_cast<std::size_t>(i)];
         k < d.collar_offsets[static_cast<std::size_t>(i) + 1]; ++k) {
      const CollarPartner& c = d.collar_partners[static_cast<std::size_t>(k)];
      visit(i, Index(-1), c.weight, c.exponent);
    }
}

double concave_value(double t, double alpha, Truncation tr) {
  if (tr == Truncation::positive_part && t <= 0.0) return 0.0;
  return abs_power(t, alpha) / alpha;
}

double concave_derivative(double t, double alpha, Truncation tr) {
  if (tr == Truncation::positive_part && t <= 0.0) return 0.0;
  return signed_power(t, alpha);
}

double concave_second(double t, double alpha, Truncation tr) {
  if (t == 0.0 || (tr == Truncation::positive_part && t < 0.0)) return 0.0;
  return power_slope(t, alpha);
}

void require_positive_part(const ProblemSpec& spec) {
  if (!spec.nonlinearity.all_positive_part())
    throw Error(ErrorKind::configuration, "the truncated functional needs positive-part nonlinearity terms");
}

EnergyBreakdown energy_impl(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& d,
                            double lambda, Truncation tr) {
  check_inputs(u, spec, d);
  std::vector<double> pair_terms;
  pair_terms.reserve(static_cast<std::size_t>(d.size() * d.size()) / 2 + d.collar_partners.size() +
                     static_cast<std::size_t>(d.size()));
  for_each_pair(d, [&](Index i, Index j, double w, double p) {
    const double diff = j >= 0 ? u[i] - u[j] : u[i];
    pair_terms.push_back(w * abs_power(diff, p) / p);
  });
  for (Index i = 0; i < d.size(); ++i) {
    const double p = d.diagonal_exponent[i];
    pair_terms.push_back(d.cell_measure * d.tail[i] * abs_power(u[i], p) / p);
  }

  std::vector<double> concave(static_cast<std::size_t>(d.size())), convex(concave.size());
  for (Index i = 0; i < d.size(); ++i) {
    const Point& x = node(d, i);
    concave[static_cast<std::size_t>(i)] = d.cell_measure * concave_value(u[i], spec.alpha(x), tr);
    convex[static_cast<std::size_t>(i)] = d.cell_measure * evaluate_nonlinearity(spec, x, u[i]).F;
  }

  EnergyBreakdown e;
  e.gagliardo_term = finite_sum(pair_terms, "Gagliardo energy", d);
  e.concave_term = lambda * finite_sum(concave, "concave term", d);
  e.convex_term = finite_sum(convex, "convex term", d);
  e.total = e.gagliardo_term - e.concave_term - e.convex_term;
  if (!std::isfinite(e.total)) throw Error(ErrorKind::numeric, "energy overflow");
  return e;
}

GridFunction gradient_impl(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& d,
                           double lambda, Truncation tr) {
  const GridFunction a = apply_operator(u, spec, d);
  GridFunction g(u.size());
  for (Index i = 0; i < d.size(); ++i) {
    const Point& x = node(d, i);
    const double local = lambda * concave_derivative(u[i], spec.alpha(x), tr) +
                         evaluate_nonlinearity(spec, x, u[i]).f;
    g[i] = d.cell_measure * (a[i] - local);
  }
  return g;
}

}  // namespace

double gagliardo_modular(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& d) {
  check_inputs(u, spec, d);
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(d.size() * d.size()) / 2 + d.collar_partners.size());
  for_each_pair(d, [&](Index i, Index j, double w, double p) {
    const double diff = j >= 0 ? u[i] - u[j] : u[i];
    terms.push_back(2.0 * w * abs_power(diff, p));
  });
  for (Index i = 0; i < d.size(); ++i)
    terms.push_back(2.0 * d.cell_measure * d.tail[i] * abs_power(u[i], d.diagonal_exponent[i]));
  return finite_sum(terms, "Gagliardo modular", d);
}

ScaledModular gagliardo_scaled_modular(const GridFunction& u, const ProblemSpec& spec,
                                       const DiscreteDomain& d) {
  check_inputs(u, spec, d);
  ScaledModular m;
  for_each_pair(d, [&](Index i, Index j, double w, double p) {
    const double diff = j >= 0 ? u[i] - u[j] : u[i];
    m.add(p, 2.0 * w * abs_power(diff, p));
  });
  for (Index i = 0; i < d.size(); ++i)
    m.add(d.diagonal_exponent[i], 2.0 * d.cell_measure * d.tail[i] * abs_power(u[i], d.diagonal_exponent[i]));
  m.finalize();
  return m;
}

GridFunction gagliardo_modular_gradient(const GridFunction& u, const ProblemSpec& spec,
                                        const DiscreteDomain& d) {
  check_inputs(u, spec, d);
  const Index N = d.size();
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(N));
  for_each_pair(d, [&](Index i, Index j, double w, double p) {
    const double diff = j >= 0 ? u[i] - u[j] : u[i];
    const double t = 2.0 * w * p * signed_power(diff, p);
    rows[static_cast<std::size_t>(i)].push_back(t);
    if (j >= 0) rows[static_cast<std::size_t>(j)].push_back(-t);
  });
  GridFunction g(N);
  for (Index i = 0; i < N; ++i) {
    const double p = d.diagonal_exponent[i];
    auto& row = rows[static_cast<std::size_t>(i)];
    row.push_back(2.0 * d.cell_measure * d.tail[i] * p * signed_power(u[i], p));
    g[i] = finite_sum(row, "modular gradient", d);
  }
  return g;
}

LuxemburgResult x0_norm(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& d, double tol) {
  return solve_gauge(gagliardo_scaled_modular(u, spec, d), tol);
}

GridFunction apply_operator(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& d) {
  check_inputs(u, spec, d);
  const Index N = d.size();
  GridFunction out(N);
  std::vector<double> row;
  row.reserve(static_cast<std::size_t>(N) + 64);
  for (Index i = 0; i < N; ++i) {
    row.clear();
    for (Index j = 0; j < N; ++j) {
      if (j == i) continue;
      row.push_back(d.interior_weights(i, j) / d.cell_measure *
                    signed_power(u[i] - u[j], d.interior_exponents(i, j)));
    }
    for (Index k = d.collar_offsets[static_cast<std::size_t>(i)];
         k < d.collar_offsets[static_cast<std::size_t>(i) + 1]; ++k) {
      const CollarPartner& c = d.collar_partners[static_cast<std::size_t>(k)];
      row.push_back(c.weight / d.cell_measure * signed_power(u[i], c.exponent));
    }
    row.push_back(d.tail[i] * signed_power(u[i], d.diagonal_exponent[i]));
    out[i] = finite_sum(row, "operator", d);
  }
  return out;
}

EnergyBreakdown energy(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& d, double lambda) {
  return energy_impl(u, spec, d, lambda, Truncation::none);
}

GridFunction energy_gradient(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& d,
                             double lambda) {
  return gradient_impl(u, spec, d, lambda, Truncation::none);
}

EnergyBreakdown energy_plus(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& d,
                            double lambda) {
  require_positive_part(spec);
  return energy_impl(u, spec, d, lambda, Truncation::positive_part);
}

GridFunction energy_plus_gradient(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& d,
                                  double lambda) {
  require_positive_part(spec);
  return gradient_impl(u, spec, d, lambda, Truncation::positive_part);
}

Eigen::MatrixXd energy_hessian(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& d,
                               double lambda, Truncation tr) {
  check_inputs(u, spec, d);
  if (tr == Truncation::positive_part) require_positive_part(spec);
  const Index N = d.size();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
  for_each_pair(d, [&](Index i, Index j, double w, double p) {
    const double diff = j >= 0 ? u[i] - u[j] : u[i];
    const double c = w * power_slope(diff, p);
    H(i, i) += c;
    if (j >= 0) {
      H(j, j) += c;
      H(i, j) -= c;
      H(j, i) -= c;
    }
  });
  for (Index i = 0; i < N; ++i) {
    const Point& x = node(d, i);
    H(i, i) += d.cell_measure * (d.tail[i] * power_slope(u[i], d.diagonal_exponent[i]) -
                                 lambda * concave_second(u[i], spec.alpha(x), tr) -
                                 nonlinearity_derivative(spec, x, u[i]));
  }
  return H;
}

double weak_form_pairing(const GridFunction& u, const GridFunction& w, const ProblemSpec& spec,
                         const DiscreteDomain& d, double lambda, Truncation tr) {
  check_inputs(u, spec, d);
  check_inputs(w, spec, d);
  if (tr == Truncation::positive_part) require_positive_part(spec);
  std::vector<double> terms;
  for_each_pair(d, [&](Index i, Index j, double wt, double p) {
    if (j >= 0) terms.push_back(wt * signed_power(u[i] - u[j], p) * (w[i] - w[j]));
    else terms.push_back(wt * signed_power(u[i], p) * w[i]);
  });
  for (Index i = 0; i < d.size(); ++i) {
    const Point& x = node(d, i);
    terms.push_back(d.cell_measure * d.tail[i] * signed_power(u[i], d.diagonal_exponent[i]) * w[i]);
    terms.push_back(-d.cell_measure * lambda * concave_derivative(u[i], spec.alpha(x), tr) * w[i]);
    terms.push_back(-d.cell_measure * evaluate_nonlinearity(spec, x, u[i]).f * w[i]);
  }
  return finite_sum(terms, "weak-form pairing", d);
}

EnergyBreakdown EnergyFunctional::breakdown(const GridFunction& u) const {
  return truncation_ == Truncation::none ? energy(u, spec_, domain_, lambda_)
                                         : energy_plus(u, spec_, domain_, lambda_);
}

GridFunction EnergyFunctional::gradient(const GridFunction& u) const {
  return truncation_ == Truncation::none ? energy_gradient(u, spec_, domain_, lambda_)
                                         : energy_plus_gradient(u, spec_, domain_, lambda_);
}

Eigen::MatrixXd EnergyFunctional::hessian(const GridFunction& u) const {
  return energy_hessian(u, spec_, domain_, lambda_, truncation_);
}

}  // namespace vfrac

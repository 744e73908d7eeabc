#include "vfrac/lebesgue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vfrac {

void ScaledModular::add(double exponent, double coefficient) {
  if (coefficient != 0.0) raw_.emplace_back(exponent, coefficient);
}

void ScaledModular::finalize() {
  std::stable_sort(raw_.begin(), raw_.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  groups_.clear();
  std::vector<double> buf;
  for (std::size_t i = 0; i < raw_.size();) {
    std::size_t j = i;
    buf.clear();
    while (j < raw_.size() && raw_[j].first == raw_[i].first) buf.push_back(raw_[j++].second);
    groups_.emplace_back(raw_[i].first, tree_sum(buf));
    i = j;
  }
  raw_.clear();
  raw_.shrink_to_fit();
  if (!groups_.empty()) {
    min_exponent_ = groups_.front().first;
    max_exponent_ = groups_.back().first;
  }
}

double ScaledModular::operator()(double scale) const {
  if (groups_.size() == 1) return groups_[0].second * std::pow(scale, -groups_[0].first);
  std::vector<double> terms;
  terms.reserve(groups_.size());
  for (const auto& [e, c] : groups_) terms.push_back(c * std::pow(scale, -e));
  return tree_sum(terms);
}

LuxemburgResult solve_gauge(const ScaledModular& modular, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::configuration, "tolerance must be positive");
  LuxemburgResult out;
  if (modular.empty()) return out;

  const double m1 = modular.at_unit_scale();
  if (!std::isfinite(m1) || !(m1 > 0.0))
    throw Error(ErrorKind::numeric, "modular is not finite and positive");
  const double emin = modular.min_exponent(), emax = modular.max_exponent();
  double lo, hi;
  if (m1 >= 1.0) {
    lo = std::pow(m1, 1.0 / emax);
    hi = std::pow(m1, 1.0 / emin);
  } else {
    lo = std::pow(m1, 1.0 / emin);
    hi = std::pow(m1, 1.0 / emax);
  }
  lo *= 1.0 - 1e-9;
  hi *= 1.0 + 1e-9;
  for (int k = 0; k < 200 && !(modular(lo) >= 1.0); ++k) lo *= 0.5;
  for (int k = 0; k < 200 && !(modular(hi) <= 1.0); ++k) hi *= 2.0;
  if (!(modular(lo) >= 1.0) || !(modular(hi) <= 1.0) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::numeric, "Luxemburg bracket failure");

  double best = 0.5 * (lo + hi), best_res = std::abs(modular(best) - 1.0);
  int it = 0;
  for (; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = modular(mid);
    const double res = std::abs(v - 1.0);
    if (res < best_res) {
      best_res = res;
      best = mid;
    }
    if (res <= tol && (hi - lo) <= 1e-12 * hi) break;
    if (v > 1.0) lo = mid;
    else hi = mid;
  }
  out.norm = best;
  out.residual = best_res;
  out.iterations = it;
  return out;
}

double lebesgue_modular(const GridFunction& u, const ExponentField1& beta, const DiscreteDomain& domain) {
  std::vector<double> terms(static_cast<std::size_t>(u.size()));
  for (Eigen::Index i = 0; i < u.size(); ++i)
    terms[static_cast<std::size_t>(i)] =
        domain.cell_measure * abs_power(u[i], beta(domain.interior_nodes[static_cast<std::size_t>(i)]));
  return tree_sum(terms);
}

LuxemburgResult luxemburg_norm(const GridFunction& u, const Eigen::VectorXd& beta_nodes,
                               const DiscreteDomain& domain, double tol) {
  ScaledModular m;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    m.add(beta_nodes[i], domain.cell_measure * abs_power(u[i], beta_nodes[i]));
  m.finalize();
  return solve_gauge(m, tol);
}

LuxemburgResult luxemburg_norm(const GridFunction& u, const ExponentField1& beta,
                               const DiscreteDomain& domain, double tol) {
  return luxemburg_norm(u, sample(domain, beta.evaluator), domain, tol);
}

BoundCheck holder_bound_check(const GridFunction& u, const GridFunction& v, const ExponentField1& beta,
                              const DiscreteDomain& domain) {
  const Eigen::VectorXd b = sample(domain, beta.evaluator);
  if (!(b.minCoeff() > 1.0)) throw Error(ErrorKind::domain, "Hoelder check needs beta- > 1");
  const Eigen::VectorXd conj = b.array() / (b.array() - 1.0);
  BoundCheck out;
  out.lhs = domain.cell_measure * tree_sum(Eigen::VectorXd(u.cwiseProduct(v).cwiseAbs()));
  out.rhs = 2.0 * luxemburg_norm(u, b, domain).norm * luxemburg_norm(v, conj, domain).norm;
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

BoundCheck power_norm_bound(const GridFunction& u, const ExponentField1& mu, const ExponentField1& nu,
                            const DiscreteDomain& domain) {
  const Eigen::VectorXd m = sample(domain, mu.evaluator);
  const Eigen::VectorXd n = sample(domain, nu.evaluator);
  const Eigen::VectorXd mn = m.cwiseProduct(n);
  if (!(mn.minCoeff() >= 1.0)) throw Error(ErrorKind::domain, "power-norm bound needs mu nu >= 1");
  GridFunction powered(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) powered[i] = abs_power(u[i], m[i]);
  const double base = luxemburg_norm(u, mn, domain).norm;
  BoundCheck out;
  out.lhs = luxemburg_norm(powered, n, domain).norm;
  out.rhs = std::pow(base, m.minCoeff()) + std::pow(base, m.maxCoeff());
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12);
  return out;
}

}  // namespace vfrac

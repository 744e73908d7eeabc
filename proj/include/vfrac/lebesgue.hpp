#ifndef VFRAC_LEBESGUE_HPP
#define VFRAC_LEBESGUE_HPP

#include "vfrac/domain.hpp"

#include <vector>

namespace vfrac {

struct LuxemburgResult {
  double norm = 0.0;
  double residual = 0.0;  // |modular(u / norm) - 1|, 0 for u = 0
  int iterations = 0;
};

/// t -> sum_k c_k t^{-e_k}, i.e. the modular of u / t for a modular that is a
/// finite sum of powers. Terms with equal exponents are merged, so evaluating
/// at a new scale costs one pow per distinct exponent.
class ScaledModular {
public:
  void add(double exponent, double coefficient);
  /// Groups equal exponents; call once after the last add().
  void finalize();

  double operator()(double scale) const;
  double at_unit_scale() const { return (*this)(1.0); }
  bool empty() const { return groups_.empty(); }
  double min_exponent() const { return min_exponent_; }
  double max_exponent() const { return max_exponent_; }

private:
  std::vector<std::pair<double, double>> raw_;
  std::vector<std::pair<double, double>> groups_;
  double min_exponent_ = 0.0;
  double max_exponent_ = 0.0;
};

/// Luxemburg gauge inf{t > 0 : modular(u/t) <= 1} by bracketing from the
/// norm-modular sandwich followed by bisection. The modular is strictly
/// decreasing in t, so bisection is globally safe.
LuxemburgResult solve_gauge(const ScaledModular& modular, double tol);

/// Midpoint quadrature of int_Omega |u(x)|^{beta(x)} dx.
double lebesgue_modular(const GridFunction& u, const ExponentField1& beta, const DiscreteDomain& domain);

LuxemburgResult luxemburg_norm(const GridFunction& u, const ExponentField1& beta,
                               const DiscreteDomain& domain, double tol = 1e-12);

/// Luxemburg norm for exponents given per node, with the same quadrature.
LuxemburgResult luxemburg_norm(const GridFunction& u, const Eigen::VectorXd& beta_nodes,
                               const DiscreteDomain& domain, double tol = 1e-12);

struct BoundCheck {
  bool holds = true;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// int |u v| <= 2 ||u||_{beta} ||v||_{beta'} with 1/beta + 1/beta' = 1.
BoundCheck holder_bound_check(const GridFunction& u, const GridFunction& v, const ExponentField1& beta,
                              const DiscreteDomain& domain);

/// || |u|^mu ||_{nu} <= ||u||_{mu nu}^{mu-} + ||u||_{mu nu}^{mu+}; mu-, mu+ over the nodes.
BoundCheck power_norm_bound(const GridFunction& u, const ExponentField1& mu, const ExponentField1& nu,
                            const DiscreteDomain& domain);

}  // namespace vfrac

#endif

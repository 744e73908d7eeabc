#ifndef VFRAC_NONLOCAL_HPP
#define VFRAC_NONLOCAL_HPP

#include "vfrac/domain.hpp"
#include "vfrac/lebesgue.hpp"

namespace vfrac {

/// none: J_lambda. positive_part: J_lambda^+ (u^+ in the concave term, f truncated).
enum class Truncation { none, positive_part };

struct EnergyBreakdown {
  double gagliardo_term = 0.0;  // unordered pairs and tail, weighted by 1/p
  double concave_term = 0.0;    // lambda sum h |u|^alpha / alpha
  double convex_term = 0.0;     // sum h F(x, u)
  double total = 0.0;           // gagliardo - concave - convex
};

/// Discrete rho_{X0}(u): the double integral over R^n x R^n of
/// |u(x)-u(y)|^p / |x-y|^{n+sp}. Interior pairs, interior-collar pairs and the
/// analytic tail each appear twice, once per ordering.
double gagliardo_modular(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& domain);

/// The modular of u / t as a function of t, for the X0 gauge.
ScaledModular gagliardo_scaled_modular(const GridFunction& u, const ProblemSpec& spec,
                                       const DiscreteDomain& domain);

/// d rho_{X0} / d u_i.
GridFunction gagliardo_modular_gradient(const GridFunction& u, const ProblemSpec& spec,
                                        const DiscreteDomain& domain);

LuxemburgResult x0_norm(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& domain,
                        double tol = 1e-12);

/// Pointwise principal-value operator at the interior nodes:
/// A(u)_i = sum_{j != i} (w_ij / h^n) |u_i - u_j|^{p_ij - 2} (u_i - u_j) + tail_i |u_i|^{p_ii - 2} u_i.
GridFunction apply_operator(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& domain);

EnergyBreakdown energy(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& domain,
                       double lambda);

/// g_i = h^n [A(u)_i - lambda |u_i|^{alpha_i - 2} u_i - f(x_i, u_i)].
GridFunction energy_gradient(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& domain,
                             double lambda);

/// Requires every nonlinearity term in positive-part mode.
EnergyBreakdown energy_plus(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& domain,
                            double lambda);
GridFunction energy_plus_gradient(const GridFunction& u, const ProblemSpec& spec,
                                  const DiscreteDomain& domain, double lambda);

/// Dense Hessian of J_lambda (or J_lambda^+). Where |d|^{p-2} is singular
/// (p < 2, d = 0) the difference is floored at 1e-12.
Eigen::MatrixXd energy_hessian(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& domain,
                               double lambda, Truncation truncation = Truncation::none);

/// <J'(u), w> in pair form: sum over unordered pairs of
/// w_ij |u_i-u_j|^{p-2}(u_i-u_j)(w_i-w_j), plus collar, tail and local terms.
/// Shares no code path with energy_gradient and serves as its independent check.
double weak_form_pairing(const GridFunction& u, const GridFunction& w, const ProblemSpec& spec,
                         const DiscreteDomain& domain, double lambda,
                         Truncation truncation = Truncation::none);

/// J_lambda or J_lambda^+ bound to a problem, a grid and a lambda.
class EnergyFunctional {
public:
  EnergyFunctional(const ProblemSpec& spec, const DiscreteDomain& domain, double lambda,
                   Truncation truncation = Truncation::none)
      : spec_(spec), domain_(domain), lambda_(lambda), truncation_(truncation) {}

  EnergyBreakdown breakdown(const GridFunction& u) const;
  double operator()(const GridFunction& u) const { return breakdown(u).total; }
  GridFunction gradient(const GridFunction& u) const;
  Eigen::MatrixXd hessian(const GridFunction& u) const;

  const ProblemSpec& spec() const { return spec_; }
  const DiscreteDomain& domain() const { return domain_; }
  double lambda() const { return lambda_; }
  Truncation truncation() const { return truncation_; }

private:
  const ProblemSpec& spec_;
  const DiscreteDomain& domain_;
  double lambda_;
  Truncation truncation_;
};

}  // namespace vfrac

#endif

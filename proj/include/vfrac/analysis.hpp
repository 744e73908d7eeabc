#ifndef VFRAC_ANALYSIS_HPP
#define VFRAC_ANALYSIS_HPP

#include "vfrac/solvers.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace vfrac {

template <typename T>
struct Sides {
  T lhs;
  T rhs;
  T margin() const { return rhs - lhs; }
};

/// |x-y|^p against Simon's bound:
///   1 < p < 2:  (1/(p-1)) [(phi(x)-phi(y))(x-y)]^{p/2} (|x|^p + |y|^p)^{(2-p)/2}
///   p >= 2:     2^p (phi(x)-phi(y))(x-y)
/// with phi(t) = |t|^{p-2} t.
template <typename T>
Sides<T> simon_sides(T x, T y, T p) {
  using std::abs;
  using std::pow;
  const T lhs = abs_power(T(x - y), p);
  using std::max;
  const T mono = max(T(0), T((signed_power(x, p) - signed_power(y, p)) * (x - y)));
  if (p < T(2)) {
    const T mass = abs_power(x, p) + abs_power(y, p);
    if (mass == T(0)) return {lhs, T(0)};
    return {lhs, pow(mono, p / T(2)) * pow(mass, (T(2) - p) / T(2)) / (p - T(1))};
  }
  return {lhs, pow(T(2), p) * mono};
}

template <typename T>
T check_simon(T x, T y, T p) {
  return simon_sides(x, y, p).margin();
}

/// |a-b|^{p-2}(a-b)(a_m^k - b_m^k) >= k p^p / (k+p-1)^p |a_m^g - b_m^g|^p,
/// g = (k+p-1)/p, a_m = min(a,m). The larger side is `rhs` here so the
/// margin keeps the rhs - lhs convention.
template <typename T>
Sides<T> truncation_sides(T a, T b, T m, T kappa, T p) {
  using std::abs;
  using std::min;
  using std::pow;
  const T am = min(a, m), bm = min(b, m);
  const T big = signed_power(T(a - b), p) * (pow(am, kappa) - pow(bm, kappa));
  const T g = (kappa + p - T(1)) / p;
  const T small = kappa * pow(p, p) / pow(kappa + p - T(1), p) * abs_power(T(pow(am, g) - pow(bm, g)), p);
  return {small, big};
}

template <typename T>
T check_truncation_inequality(T a, T b, T m, T kappa, T p) {
  return truncation_sides(a, b, m, kappa, p).margin();
}

/// |ux^eta - uy^eta| >= |ux^eta0 - uy^eta0| for ux, uy > 1 and 0 <= eta0 <= eta.
/// Throws Error(domain) outside that set.
template <typename T>
Sides<T> power_comparison_sides(T ux, T uy, T eta, T eta0) {
  using std::abs;
  using std::pow;
  if (!(ux > T(1) && uy > T(1)))
    throw Error(ErrorKind::domain, "power comparison needs u > 1 at both points");
  if (!(T(0) <= eta0 && eta0 <= eta)) throw Error(ErrorKind::domain, "power comparison needs 0 <= eta0 <= eta");
  return {abs(pow(ux, eta0) - pow(uy, eta0)), abs(pow(ux, eta) - pow(uy, eta))};
}

template <typename T>
T check_power_comparison(T ux, T uy, T eta, T eta0) {
  return power_comparison_sides(ux, uy, eta, eta0).margin();
}

struct InequalityReport {
  std::string name;
  long samples = 0;
  long violations = 0;
  double worst_margin = std::numeric_limits<double>::infinity();  // smallest (rhs - lhs) / (|lhs| + |rhs|)
  std::optional<std::string> witness;

  /// Counts a violation when rhs - lhs < -slack (|lhs| + |rhs|).
  void record(double lhs, double rhs, double slack, const std::string& input);
  void merge(const InequalityReport& other);
  bool passed() const { return violations == 0; }
};

/// Seeded random suites over each inequality's precondition set.
InequalityReport simon_suite(long samples, std::uint64_t seed);
InequalityReport truncation_suite(long samples, std::uint64_t seed);
InequalityReport power_comparison_suite(long samples, std::uint64_t seed);

/// Norm-modular interplay for (x0_norm, gagliardo_modular):
///   norm > 1: norm^{p-} <= rho <= norm^{p+}
///   norm < 1: norm^{p+} <= rho <= norm^{p-}
///   norm = 1: rho = 1
/// p-, p+ over the exponents that actually occur on the grid.
InequalityReport check_norm_modular_interplay(const GridFunction& u, const ProblemSpec& spec,
                                              const DiscreteDomain& domain, double tol = 1e-9);

/// Extremes of p(x,y) over interior pairs, collar pairs and the diagonal.
std::pair<double, double> grid_exponent_range(const DiscreteDomain& domain);

struct EmbeddingEstimate {
  double sup_ratio = 0.0;
  GridFunction maximizer;
  std::vector<double> running_sup;  // after each trial
  int trials = 0;
};

/// sup ||u||_{L^beta} / ||u||_{X0} over Gaussian bumps refined by 50 steps of
/// normalized gradient ascent. Throws Error(configuration) for trials < 1 and
/// Error(domain) when beta >= p_s* at a node.
EmbeddingEstimate estimate_embedding_constant(const ProblemSpec& spec, const DiscreteDomain& domain,
                                              const ExponentField1& beta, int trials, std::uint64_t seed);

struct BootstrapConfig {
  /// Unset: theta = (r+ + min p_s*) / 2.
  std::optional<ExponentField1> theta;
  int max_steps = 50;
  double exponent_cap = 5000.0;
};

struct BootstrapReport {
  std::vector<double> gammas;     // gamma_m, m = 1, 2, ...
  std::vector<double> exponents;  // gamma_m theta-
  std::vector<double> norms;      // ||u||_{L^{gamma_m theta-}}
  std::vector<double> bounds;     // right side of the chain at each step
  double base_norm = 0.0;         // ||u||_{L^{theta-}}
  double constant = 0.0;          // c measured at m = 1
  double theta_minus = 0.0;
  double r_plus = 0.0;
  double p_minus = 0.0;
  double linf = 0.0;
  bool bound_chain_ok = false;
  bool ladder_monotone = false;
  /// max|u| <= 1: the chain is run but carries no information.
  bool trivial = false;
};

/// Moser-type ladder ||u||_{L^{gamma_m theta-}} on |u| with
///   N_m <= c^{1/gamma_m} (gamma_m^{1/gamma_m})^{r+/p-} N_{m-1}^{r+/p-},
/// c fixed by equality at m = 1. Throws Error(configuration) unless theta- > r+.
BootstrapReport bootstrap_linf(const GridFunction& u, const ProblemSpec& spec, const DiscreteDomain& domain,
                               const BootstrapConfig& config = {});

/// Overflow-safe L^q norm L (sum h (|u|/L)^q)^{1/q}, L = max|u|.
double scaled_lq_norm(const GridFunction& u, double q, const DiscreteDomain& domain);

}  // namespace vfrac

#endif

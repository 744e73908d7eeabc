#ifndef VFRAC_PROBLEM_HPP
#define VFRAC_PROBLEM_HPP

#include "vfrac/common.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vfrac {

/// Two-point field such as the order s(x,y) or the exponent p(x,y).
struct ExponentField2 {
  std::function<double(const Point&, const Point&)> evaluator;
  double declared_min = 0.0;
  double declared_max = 0.0;

  double operator()(const Point& x, const Point& y) const { return evaluator(x, y); }

  static ExponentField2 constant(double value);
  /// Wraps g as (g(x,y) + g(y,x)) / 2, which is symmetric bit for bit.
  static ExponentField2 symmetrized(std::function<double(const Point&, const Point&)> g,
                                    double declared_min, double declared_max);
  /// Uses g as given. Symmetry is then only checked by validation.
  static ExponentField2 raw(std::function<double(const Point&, const Point&)> g,
                            double declared_min, double declared_max);
};

/// One-point field: alpha(x), r(x), the term exponents, Lebesgue exponents.
struct ExponentField1 {
  std::function<double(const Point&)> evaluator;
  double declared_min = 0.0;
  double declared_max = 0.0;

  double operator()(const Point& x) const { return evaluator(x); }

  static ExponentField1 constant(double value);
  static ExponentField1 from(std::function<double(const Point&)> g, double declared_min,
                             double declared_max);
};

enum class SignMode { odd_power, positive_part };

const char* to_string(SignMode mode);

/// c(x) |t|^{rho(x)-2} t   (odd_power)   or   c(x) (t^+)^{rho(x)-1}   (positive_part).
struct PowerTerm {
  std::function<double(const Point&)> coefficient;
  ExponentField1 exponent;
  SignMode mode = SignMode::odd_power;
};

struct NonlinearitySpec {
  std::vector<PowerTerm> terms;
  double growth_bound = 1.0;  // M
  double ar_a = 1.0;          // a: the AR inequality is required for |t| > a
  double ar_b = 0.0;          // b: must exceed p+
  double t_star = 1.0;

  bool all_positive_part() const;
};

struct ProblemSpec {
  int dimension = 1;
  Box omega;
  ExponentField2 s;
  ExponentField2 p;
  ExponentField1 alpha;
  ExponentField1 r;
  NonlinearitySpec nonlinearity;
  double lambda = 0.0;

  /// q(x) = p(x,x).
  double q(const Point& x) const { return p(x, x); }
};

struct HypothesisCheck {
  std::string name;
  bool passed = false;
  double worst_margin = 0.0;
  std::optional<std::pair<Point, Point>> witness;
  std::string detail;
};

struct HypothesisReport {
  int sample_count = 0;
  std::vector<HypothesisCheck> checks;
  /// Standing assumptions: bounds of s and p and the strict sp < n.
  bool admissible = false;
  bool multiplicity_eligible = false;
  bool regularity_eligible = false;
  double min_critical_exponent = 0.0;

  const HypothesisCheck& at(const std::string& name) const;
};

/// Deterministic low-discrepancy check of every standing hypothesis.
/// Throws Error(configuration) when a sampled value escapes its declared
/// bounds and Error(evaluator) when a field returns NaN.
HypothesisReport validate_hypotheses(const ProblemSpec& spec, int sample_count);

/// p_s*(x) = n p(x,x) / (n - s(x,x) p(x,x)).
double critical_exponent(const ProblemSpec& spec, const Point& x);

struct NonlinearityValue {
  double f = 0.0;
  double F = 0.0;
};

/// f(x,t) and its exact antiderivative F(x,t) = int_0^t f(x,tau) dtau.
NonlinearityValue evaluate_nonlinearity(const ProblemSpec& spec, const Point& x, double t);

/// d f / d t, used by the Newton polish in the solvers.
double nonlinearity_derivative(const ProblemSpec& spec, const Point& x, double t);

}  // namespace vfrac

#endif

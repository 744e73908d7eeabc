#ifndef VFRAC_SOLVERS_HPP
#define VFRAC_SOLVERS_HPP

#include "vfrac/nonlocal.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace vfrac {

/// Named initial shape scaled by an amplitude.
///   sine:     prod_k sin(pi (x_k - lo_k) / L_k)
///   gaussian: exp(-|x - c|^2 / (2 sigma^2)), sigma = L / 8
///   zero:     u = 0
struct InitialProfile {
  std::string shape = "sine";
  double amplitude = 1.0;

  GridFunction sample(const DiscreteDomain& domain) const;
};

struct SolverConfig {
  int max_iters = 20000;
  double grad_tol = 1e-8;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
  /// X0-ball radius for find_local_min. Unset: chosen by a barrier scan.
  std::optional<double> ball_radius;
  int path_points = 32;
  std::uint64_t seed = 1;
  InitialProfile xi;   // mountain-pass endpoint direction
  InitialProfile phi;  // local-min start direction
  /// First-order stages hand over to Newton below this gradient norm.
  double polish_switch = 1e-4;
  int newton_iters = 60;
  int eigen_restarts = 3;

  /// Throws Error(configuration) on grad_tol <= 0, armijo_c or backtrack
  /// outside (0,1), ball_radius outside (0,1] or path_points < 8.
  void validate() const;
};

enum class SolutionKind { mountain_pass, local_min, eigenfunction };

const char* to_string(SolutionKind kind);

struct Solution {
  GridFunction u;
  double energy = 0.0;
  double grad_norm = 0.0;
  SolutionKind kind = SolutionKind::local_min;
  int iterations = 0;
  bool converged = false;
  double linf_norm = 0.0;
  double min_value = 0.0;
  double x0_norm = 0.0;
  std::optional<int> morse_index;
  std::optional<double> eigenvalue;
  std::optional<double> ball_radius;
  /// Mountain pass: the endpoint scale T. Eigenproblem: constraint residual.
  std::optional<double> auxiliary;
  std::string note;
};

/// Descent from t phi (t halved from 0.1 until J < 0) inside the X0 ball of
/// radius delta, followed by a Newton polish accepted only at a Morse-index-0
/// point inside the ball with no energy increase.
Solution find_local_min(const ProblemSpec& spec, const DiscreteDomain& domain, double lambda,
                        const SolverConfig& config, Truncation truncation = Truncation::none);

/// Path deformation between 0 and T xi, T doubled until J(T xi) < 0.
/// Newton polish is accepted only at a Morse-index-1 point of positive energy.
/// Throws Error(geometry) when the path maximum sits at an endpoint or no T
/// with J(T xi) < 0 exists.
Solution mountain_pass(const ProblemSpec& spec, const DiscreteDomain& domain, double lambda,
                       const SolverConfig& config, Truncation truncation = Truncation::none);

/// (mountain pass, local min) of J_lambda^+.
std::pair<Solution, Solution> solve_nonnegative(const ProblemSpec& spec, const DiscreteDomain& domain,
                                                double lambda, const SolverConfig& config);

/// The candidate radii scanned when SolverConfig::ball_radius is unset, and the
/// chosen one (largest minimal sampled energy on the sphere).
struct BarrierScan {
  std::vector<double> radii;
  std::vector<double> min_energy;
  double chosen = 1.0;
};
BarrierScan barrier_scan(const EnergyFunctional& J, const SolverConfig& config);

struct SweepRow {
  double lambda = 0.0;
  bool local_min_found = false;
  double local_min_energy = 0.0;
  bool mountain_pass_found = false;
  double mountain_pass_energy = 0.0;
  bool distinct = false;
  double separation = 0.0;
  std::string failure;
  std::optional<Solution> local_min;
  std::optional<Solution> mountain_pass;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::optional<double> lambda_star;
};

/// Distinctness: both converged, ||u1 - u2||_inf > 1e-3 (1 + ||u1||_inf) and
/// J(u1) > 0 > J(u2). Solver failures are recorded per row.
SweepReport lambda_sweep(const ProblemSpec& spec, const DiscreteDomain& domain,
                         const std::vector<double>& lambda_grid, const SolverConfig& config,
                         Truncation truncation = Truncation::none);

bool distinct_pair(const Solution& mountain, const Solution& minimum);

/// Critical point of the Gagliardo energy on { sum h |u|^{p(x,x)} / p(x,x) = 1 }.
/// eigenvalue = sum A(u)_i u_i / sum |u_i|^{p(x_i,x_i)}. Converged when
/// ||A(u) - lambda |u|^{p-2} u|| <= grad_tol (1 + |lambda|).
Solution solve_eigenproblem(const ProblemSpec& spec, const DiscreteDomain& domain, const SolverConfig& config);

struct WeakFormCheck {
  bool passed = false;
  int directions = 0;
  double worst_ratio = 0.0;  // max |<J'(u), w>| / ||w||
};

/// |<J'(u), w>| <= tol ||w|| for seeded random directions w, through the
/// pair-form pairing rather than the assembled gradient.
WeakFormCheck weak_form_recheck(const Solution& solution, const ProblemSpec& spec, const DiscreteDomain& domain,
                                double lambda, double tol, int directions, std::uint64_t seed,
                                Truncation truncation = Truncation::none);

/// Number of eigenvalues of the energy Hessian below -1e-10 max|eig|.
int morse_index(const EnergyFunctional& J, const GridFunction& u);

/// 53-bit uniform stream on [0,1) from mt19937_64; portable across standard libraries.
class UniformStream {
public:
  explicit UniformStream(std::uint64_t seed);
  double next();
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }
  /// Standard normal by Box-Muller.
  double normal();

private:
  std::mt19937_64 engine_;
};

}  // namespace vfrac

#endif

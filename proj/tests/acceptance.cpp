// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.
#include "vfrac/pipeline.hpp"
#include "vfrac/presets.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

using namespace vfrac;
namespace fs = std::filesystem;

namespace {

constexpr double kGradientTol = 1e-5;
constexpr double kGradientSeconds = 60;
constexpr double kOperatorTol = 1e-12;
constexpr double kEigenTol = 1e-8;
constexpr double kLinearSeconds = 10;
constexpr long kSuiteSamples = 10000;
constexpr int kInterplayFunctions = 100;
constexpr double kSuiteSeconds = 30;
constexpr double kLambda = 0.05;
constexpr double kSolveTol = 1e-8;
constexpr double kSeparation = 1e-3;
constexpr int kWeakDirections = 20;
constexpr double kMultiplicitySeconds = 300;
constexpr double kNonnegativeFloor = -1e-7;
constexpr double kBootstrapWindow = 0.01;
constexpr double kBootstrapFrom = 200;
constexpr double kBootstrapSeconds = 30;
constexpr double kEmbeddingSpread = 0.25;
constexpr int kEmbeddingTrials = 1000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const Error& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    o.pass = false;
    o.detail += " [over time limit " + format_double(limit_seconds) + " s]";
  }
  if (!o.pass) ++failures;
  std::printf("%s  %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Outcome gradient_consistency() {
  oracle::Gen gen(2024);
  double worst = 0.0;
  auto run = [&](const ProblemSpec& spec, int cells) {
    const DiscreteDomain d = build_domain(spec, cells, 1.0);
    const auto J = [&](const GridFunction& v) { return energy(v, spec, d, kLambda).total; };
    for (int k = 0; k < 100; ++k) {
      const GridFunction u = gen.vector(d.size(), -2.0, 2.0), w = gen.vector(d.size(), -1.0, 1.0);
      const double pair = energy_gradient(u, spec, d, kLambda).dot(w);
      const double fd = oracle::central_difference(J, u, w, 1e-6 * (1 + u.cwiseAbs().maxCoeff()));
      worst = std::max(worst, std::abs(pair - fd) / (1 + std::abs(pair)));
    }
  };
  for (int cells : {8, 16, 32}) run(presets::spec_a(), cells);
  run(presets::spec_a_2d(), 8);
  return {worst <= kGradientTol, "worst relative gap " + num(worst) + " <= " + num(kGradientTol)};
}

Outcome linear_oracle() {
  const ProblemSpec spec = presets::spec_a();
  const DiscreteDomain d = build_domain(spec, 32, 1.0);
  const Eigen::MatrixXd M = oracle::linear_operator(oracle::make_grid(1, 32), 0.4);
  Eigen::MatrixXd A(d.size(), d.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) A.col(k) = apply_operator(GridFunction::Unit(d.size(), k), spec, d);
  const double op_err = (A - M).norm() / M.norm();

  const Solution e = solve_eigenproblem(spec, d, SolverConfig{});
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const double lambda = es.eigenvalues()[0];
  Eigen::VectorXd v = es.eigenvectors().col(0);
  const Eigen::VectorXd u = e.u.normalized();
  if (v.dot(u) < 0) v = -v;
  const double val_err = std::abs(e.eigenvalue.value_or(0.0) - lambda) / lambda;
  const double vec_err = (u - v).norm();
  const bool ok = op_err <= kOperatorTol && val_err <= kEigenTol && vec_err <= kEigenTol && e.converged;
  return {ok, "operator " + num(op_err) + ", eigenvalue " + num(val_err) + ", eigenvector " + num(vec_err)};
}

Outcome inequality_suites() {
  const InequalityReport reps[] = {simon_suite(kSuiteSamples, 1), truncation_suite(kSuiteSamples, 2),
                                   power_comparison_suite(kSuiteSamples, 3)};
  long violations = 0;
  for (const auto& r : reps) violations += r.violations + (r.samples == kSuiteSamples ? 0 : 1);

  const ProblemSpec spec = presets::spec_variable();
  const DiscreteDomain d = build_domain(spec, 16, 1.0);
  oracle::Gen gen(7);
  int above = 0, below = 0;
  for (int k = 0; k < kInterplayFunctions; ++k) {
    const GridFunction u = gen.gaussian_vector(d.size()) * std::exp(gen.uniform(-4.0, 4.0));
    const InequalityReport r = check_norm_modular_interplay(u, spec, d);
    violations += r.violations;
    (x0_norm(u, spec, d).norm > 1.0 ? above : below) += 1;
  }
  const bool ok = violations == 0 && above > 0 && below > 0;
  return {ok, std::to_string(violations) + " violations; interplay norm>1: " + std::to_string(above) +
                  ", norm<1: " + std::to_string(below)};
}

struct Pair {
  GridFunction u1, u2;
  double e1 = 0, e2 = 0, g1 = 0, g2 = 0, min1 = 0, min2 = 0;
  int exit_code = 0;
};

Pair solve_pipeline(bool nonnegative, const fs::path& out) {
  RunManifest m;
  m.command = "solve";
  m.lambda = kLambda;
  m.nonnegative = nonnegative;
  m.out_dir = out;
  std::ostringstream log;
  Pair p;
  p.exit_code = run(m, log).exit_code;
  const ProblemSpec spec = presets::spec_a(nonnegative ? SignMode::positive_part : SignMode::odd_power);
  const DiscreteDomain d = build_domain(spec, 32, 1.0);
  const auto mp = nlohmann::json::parse(read_file(out / "solution_mp.json"));
  const auto mn = nlohmann::json::parse(read_file(out / "solution_min.json"));
  p.u1 = read_solution(out / "solution_mp.json", d);
  p.u2 = read_solution(out / "solution_min.json", d);
  p.e1 = mp["energy"];
  p.e2 = mn["energy"];
  p.g1 = mp["grad_norm"];
  p.g2 = mn["grad_norm"];
  p.min1 = p.u1.minCoeff();
  p.min2 = p.u2.minCoeff();
  return p;
}

Outcome multiplicity(const fs::path& out) {
  const Pair p = solve_pipeline(false, out);
  const ProblemSpec spec = presets::spec_a();
  const DiscreteDomain d = build_domain(spec, 32, 1.0);
  auto recheck = [&](const GridFunction& u, std::uint64_t seed) {
    Solution s;
    s.u = u;
    return weak_form_recheck(s, spec, d, kLambda, kSolveTol, kWeakDirections, seed);
  };
  const WeakFormCheck w1 = recheck(p.u1, 101), w2 = recheck(p.u2, 102);
  const double sep = (p.u1 - p.u2).cwiseAbs().maxCoeff();
  const bool ok = p.exit_code == 0 && p.g1 <= kSolveTol && p.g2 <= kSolveTol && p.e1 > 0 && p.e2 < 0 &&
                  sep > kSeparation && w1.passed && w2.passed;
  return {ok, "J(u1) = " + num(p.e1) + ", J(u2) = " + num(p.e2) + ", |g| = " + num(p.g1) + " / " + num(p.g2) +
                  ", sep " + num(sep) + ", weak form " + num(w1.worst_ratio) + " / " + num(w2.worst_ratio)};
}

Outcome nonnegative(const fs::path& out) {
  const Pair p = solve_pipeline(true, out);
  const bool ok = p.exit_code == 0 && p.min1 >= kNonnegativeFloor && p.min2 >= kNonnegativeFloor &&
                  p.g1 <= kSolveTol && p.g2 <= kSolveTol && p.e1 > 0 && p.e2 < 0;
  return {ok, "min u1 = " + num(p.min1) + ", min u2 = " + num(p.min2) + ", J = " + num(p.e1) + " / " + num(p.e2)};
}

Outcome bootstrap() {
  const ProblemSpec spec = presets::spec_a();
  const DiscreteDomain d = build_domain(spec, 32, 1.0);
  const Solution u1 = mountain_pass(spec, d, kLambda, SolverConfig{});
  const BootstrapReport r = bootstrap_linf(u1.u, spec, d);
  bool increasing = r.gammas.size() >= 2;
  for (std::size_t k = 1; k < r.gammas.size(); ++k) increasing = increasing && r.gammas[k] > r.gammas[k - 1];
  bool window = false, within = true;
  double worst = 0.0;
  for (std::size_t k = 0; k < r.norms.size(); ++k)
    if (r.exponents[k] >= kBootstrapFrom) {
      window = true;
      const double gap = std::abs(r.norms[k] - r.linf) / r.linf;
      worst = std::max(worst, gap);
      within = within && gap <= kBootstrapWindow;
    }
  const bool ok = u1.converged && increasing && r.bound_chain_ok && window && within;
  return {ok, std::to_string(r.gammas.size()) + " steps, chain " + (r.bound_chain_ok ? "holds" : "broken") +
                  ", worst gap for q >= 200: " + num(worst)};
}

Outcome embedding() {
  const ProblemSpec spec = presets::spec_a();
  const ExponentField1 beta = ExponentField1::constant(3.5);
  const DiscreteDomain d16 = build_domain(spec, 16, 1.0), d32 = build_domain(spec, 32, 1.0);
  const double a = estimate_embedding_constant(spec, d16, beta, kEmbeddingTrials, 5).sup_ratio;
  const double b = estimate_embedding_constant(spec, d32, beta, kEmbeddingTrials, 5).sup_ratio;
  const double spread = std::abs(a - b) / std::max(a, b);
  const bool ok = std::isfinite(a) && std::isfinite(b) && a > 0 && b > 0 && spread <= kEmbeddingSpread;
  return {ok, "16 cells " + num(a) + ", 32 cells " + num(b) + ", spread " + num(spread)};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_file(e.path());
  return files;
}

Outcome reproducibility(const fs::path& out) {
  RunManifest m;
  m.command = "paper";
  m.out_dir = out;
  std::ostringstream log;
  const int first = run(m, log).exit_code;
  const auto a = snapshot(out);
  RunManifest again;
  again.command = "paper";
  again.out_dir = out;
  const int second = run(again, log).exit_code;
  const auto b = snapshot(out);
  const bool ok = first == 0 && second == 0 && a == b && a.size() > 1;
  return {ok, std::to_string(a.size()) + " artifacts, " + (a == b ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "vfrac_acceptance";
  fs::remove_all(out);
  fs::create_directories(out);

  criterion("gradient consistency", kGradientSeconds, gradient_consistency);
  criterion("linear-case oracle", kLinearSeconds, linear_oracle);
  criterion("inequality suites", kSuiteSeconds, inequality_suites);
  criterion("two-solution multiplicity", kMultiplicitySeconds, [&] { return multiplicity(out / "solve"); });
  criterion("nonnegative variant", 0, [&] { return nonnegative(out / "solve_nonnegative"); });
  criterion("bootstrap chain", kBootstrapSeconds, bootstrap);
  criterion("embedding finiteness", 0, embedding);
  criterion("reproducibility", 0, [&] { return reproducibility(out / "paper"); });
  return failures == 0 ? 0 : 1;
}

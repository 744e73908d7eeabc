#include "vfrac/pipeline.hpp"

#include "vfrac/presets.hpp"

#include <algorithm>

namespace vfrac {

using nlohmann::json;
namespace fs = std::filesystem;

const std::vector<std::string>& pipeline_commands() {
  static const std::vector<std::string> c = {"validate", "solve", "sweep", "eigen", "verify", "bootstrap", "paper"};
  return c;
}

const std::vector<double>& default_lambda_grid() {
  static const std::vector<double> g = {0.01, 0.05, 0.1, 0.5, 1.0};
  return g;
}

namespace {

constexpr int kWeakDirections = 20;

struct Context {
  RunManifest& m;
  std::ostream& log;
  RunResult result;
  ProblemSpec spec;

  void write(const std::string& name, const std::string& content) {
    write_atomic(m.out_dir / name, content);
    m.checksums[name] = sha256_hex(content);
  }
  void write(const std::string& name, const json& j) { write(name, j.dump(2) + "\n"); }

  void require(bool ok, const std::string& what) {
    log << (ok ? "  ok    " : "  FAIL  ") << what << "\n";
    if (!ok) {
      result.failed_assertions.push_back(what);
      result.exit_code = std::max(result.exit_code, 1);
    }
  }

  double lambda() const { return m.lambda.value_or(spec.lambda); }

  DiscreteDomain domain() const {
    DiscreteDomain d = build_domain(spec, m.cells, m.collar_factor);
    log << "grid: " << d.size() << " interior nodes, " << d.collar_nodes.size() << " collar nodes, h = "
        << format_double(d.h) << "\n";
    return d;
  }
};

ProblemSpec load_spec(const RunManifest& m, std::ostream& log) {
  if (m.spec_path.empty()) return presets::spec_a(m.nonnegative ? SignMode::positive_part : SignMode::odd_power);
  LoadedProblem p = load_problem(m.spec_path);
  for (const auto& w : p.warnings) log << "warning: " << w << "\n";
  if (m.nonnegative && !p.spec.nonlinearity.all_positive_part())
    throw Error(ErrorKind::configuration, "--nonnegative needs every term in positive mode", m.spec_path);
  return std::move(p.spec);
}

HypothesisReport cmd_validate(Context& c) {
  const HypothesisReport r = validate_hypotheses(c.spec, c.m.validation_samples);
  for (const auto& h : r.checks)
    c.log << "  " << (h.passed ? "pass " : "FAIL ") << h.name << "  margin " << format_double(h.worst_margin) << "\n";
  c.write("hypotheses.json", to_json(r));
  if (r.admissible) c.write("domain.json", domain_summary(c.domain()));
  c.log << "multiplicity eligible: " << (r.multiplicity_eligible ? "yes" : "no")
        << ", regularity eligible: " << (r.regularity_eligible ? "yes" : "no") << "\n";
  c.require(r.admissible, "standing hypotheses (S1)(S2)(P1)(P2), sp < n");
  return r;
}

std::string energy_row(const Solution& s, const EnergyBreakdown& e) {
  return std::string(to_string(s.kind)) + "," + format_double(e.total) + "," + format_double(e.gagliardo_term) + "," +
         format_double(e.concave_term) + "," + format_double(e.convex_term) + "," + format_double(s.grad_norm) + "," +
         format_double(s.linf_norm) + "," + format_double(s.min_value) + "," + (s.converged ? "1" : "0") + "\n";
}

void cmd_solve(Context& c) {
  const DiscreteDomain d = c.domain();
  const double lambda = c.lambda();
  const Truncation tr = c.m.nonnegative ? Truncation::positive_part : Truncation::none;
  Solution mp, min;
  if (c.m.nonnegative) {
    auto pair = solve_nonnegative(c.spec, d, lambda, c.m.solver);
    mp = std::move(pair.first);
    min = std::move(pair.second);
  } else {
    mp = mountain_pass(c.spec, d, lambda, c.m.solver);
    min = find_local_min(c.spec, d, lambda, c.m.solver);
  }
  c.write("solution_mp.json", to_json(mp, d));
  c.write("solution_min.json", to_json(min, d));
  c.write("solution_mp.csv", solution_csv(mp, d));
  c.write("solution_min.csv", solution_csv(min, d));
  const EnergyFunctional J(c.spec, d, lambda, tr);
  c.write("energies.csv", "kind,energy,gagliardo_term,concave_term,convex_term,grad_norm,linf_norm,min_value,converged\n" +
                              energy_row(mp, J.breakdown(mp.u)) + energy_row(min, J.breakdown(min.u)));

  c.log << "lambda = " << format_double(lambda) << "\n";
  c.log << "mountain pass: J = " << format_double(mp.energy) << ", |g| = " << format_double(mp.grad_norm)
        << ", max|u| = " << format_double(mp.linf_norm) << "\n";
  c.log << "local min:     J = " << format_double(min.energy) << ", |g| = " << format_double(min.grad_norm)
        << ", max|u| = " << format_double(min.linf_norm) << "\n";
  const double tol = c.m.solver.grad_tol;
  c.require(mp.converged, "mountain pass converged");
  c.require(min.converged, "local min converged");
  c.require(mp.energy > 0.0 && min.energy < 0.0, "J(u1) > 0 > J(u2)");
  c.require(distinct_pair(mp, min), "u1 and u2 distinct");
  const WeakFormCheck w1 = weak_form_recheck(mp, c.spec, d, lambda, tol, kWeakDirections, c.m.solver.seed, tr);
  const WeakFormCheck w2 = weak_form_recheck(min, c.spec, d, lambda, tol, kWeakDirections, c.m.solver.seed + 1, tr);
  c.require(w1.passed, "weak form re-check, mountain pass");
  c.require(w2.passed, "weak form re-check, local min");
  if (c.m.nonnegative)
    c.require(mp.min_value >= -10.0 * tol && min.min_value >= -10.0 * tol, "solutions nonnegative");
}

SweepReport cmd_sweep(Context& c, const DiscreteDomain& d) {
  const std::vector<double>& grid = c.m.lambda_grid.empty() ? default_lambda_grid() : c.m.lambda_grid;
  const SweepReport r =
      lambda_sweep(c.spec, d, grid, c.m.solver, c.m.nonnegative ? Truncation::positive_part : Truncation::none);
  for (const auto& row : r.rows)
    c.log << "  lambda " << format_double(row.lambda) << ": J(u1) = " << format_double(row.mountain_pass_energy)
          << ", J(u2) = " << format_double(row.local_min_energy) << (row.distinct ? "  distinct" : "  -") << "\n";
  c.write("sweep.json", to_json(r));
  c.write("sweep.csv", sweep_csv(r));
  c.require(r.lambda_star.has_value(), "two distinct solutions at some grid lambda");
  return r;
}

void cmd_eigen(Context& c) {
  const DiscreteDomain d = c.domain();
  const Solution s = solve_eigenproblem(c.spec, d, c.m.solver);
  c.write("eigen.json", to_json(s, d));
  c.write("eigenfunction.csv", solution_csv(s, d));
  c.log << "eigenvalue " << format_double(*s.eigenvalue) << ", residual " << format_double(s.grad_norm) << "\n";
  c.require(s.converged, "eigen residual within tolerance");
}

void cmd_verify(Context& c) {
  const DiscreteDomain d = c.domain();
  const std::uint64_t seed = c.m.solver.seed;
  std::vector<InequalityReport> suites = {simon_suite(c.m.samples, seed), truncation_suite(c.m.samples, seed + 1),
                                          power_comparison_suite(c.m.samples, seed + 2)};

  UniformStream rng(seed + 3);
  auto random_function = [&] {
    GridFunction u(d.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = rng.normal();
    return u;
  };
  InequalityReport interplay;
  interplay.name = "norm_modular_interplay";
  const double targets[] = {0.5, 2.0, 1.0};
  for (int k = 0; k < 100; ++k) {
    GridFunction u = random_function();
    const double target = k < 99 ? (k % 3 < 2 ? targets[k % 3] * rng.next(0.2, 1.0) / 0.6 : rng.next(0.05, 20.0)) : 1.0;
    u *= target / x0_norm(u, c.spec, d).norm;
    interplay.merge(check_norm_modular_interplay(u, c.spec, d));
  }
  suites.push_back(interplay);

  InequalityReport holder, power;
  holder.name = "hoelder";
  power.name = "power_norm";
  const ExponentField1 q = ExponentField1::from([&](const Point& x) { return c.spec.q(x); }, c.spec.p.declared_min,
                                                c.spec.p.declared_max);
  const ExponentField1 nu = ExponentField1::from(
      [&](const Point& x) { return c.spec.r(x) / c.spec.alpha(x); }, 1.0, std::numeric_limits<double>::infinity());
  for (int k = 0; k < 100; ++k) {
    const GridFunction u = random_function(), v = random_function();
    const BoundCheck h = holder_bound_check(u, v, q, d);
    holder.record(h.lhs, h.rhs, 1e-12, "trial " + std::to_string(k));
    const BoundCheck p = power_norm_bound(u, c.spec.alpha, nu, d);
    power.record(p.lhs, p.rhs, 1e-12, "trial " + std::to_string(k));
  }
  suites.push_back(holder);
  suites.push_back(power);

  json arr = json::array();
  long violations = 0;
  for (const auto& s : suites) {
    arr.push_back(to_json(s));
    c.log << "  " << s.name << ": " << s.samples << " samples, " << s.violations << " violations\n";
    violations += s.violations;
  }
  c.write("inequality_report.json", json{{"suites", arr}, {"violations", violations}});
  c.require(violations == 0, "zero inequality violations");

  const EmbeddingEstimate e = estimate_embedding_constant(c.spec, d, c.spec.r, c.m.embedding_trials, seed + 4);
  c.write("embedding.json", json{{"beta", "r"}, {"trials", e.trials}, {"sup_ratio", e.sup_ratio},
                                 {"running_sup", e.running_sup}});
  c.log << "  embedding sup ratio (beta = r): " << format_double(e.sup_ratio) << "\n";
  c.require(std::isfinite(e.sup_ratio) && e.sup_ratio > 0.0 && e.sup_ratio < 1e12, "embedding constant finite");
}

void cmd_bootstrap(Context& c, const DiscreteDomain& d, const GridFunction& u) {
  const BootstrapReport r = bootstrap_linf(u, c.spec, d);
  c.write("bootstrap.json", to_json(r));
  c.write("bootstrap.csv", bootstrap_csv(r));
  c.log << "  theta- = " << format_double(r.theta_minus) << ", max|u| = " << format_double(r.linf) << ", last norm "
        << (r.norms.empty() ? std::string("-") : format_double(r.norms.back())) << "\n";
  if (r.trivial) c.log << "  max|u| <= 1: the chain carries no information\n";
  c.require(r.bound_chain_ok || r.trivial, "bootstrap chain holds at every step");
  c.require(r.ladder_monotone, "norm ladder nondecreasing");
}

void cmd_paper(Context& c) {
  const HypothesisReport h = cmd_validate(c);
  c.require(h.multiplicity_eligible, "multiplicity hypotheses");
  if (!h.admissible) return;
  const DiscreteDomain d = c.domain();
  const SweepReport r = cmd_sweep(c, d);
  if (!r.lambda_star) return;
  const auto row = std::find_if(r.rows.begin(), r.rows.end(), [&](const SweepRow& x) { return x.lambda == *r.lambda_star; });
  c.write("paper_solution_mp.json", to_json(*row->mountain_pass, d));
  c.write("paper_solution_min.json", to_json(*row->local_min, d));
  c.log << "bootstrap on u1 at lambda = " << format_double(*r.lambda_star) << "\n";
  cmd_bootstrap(c, d, row->mountain_pass->u);
}

json manifest_json(const RunManifest& m) {
  json checks = json::object();
  for (const auto& [k, v] : m.checksums) checks[k] = v;
  json j = {{"command", m.command},
            {"spec", m.spec_path.empty() ? "builtin:spec_a" : m.spec_path},
            {"cells", m.cells},
            {"collar_factor", m.collar_factor},
            {"lambda_grid", m.lambda_grid},
            {"solver", to_json(m.solver)},
            {"seed", m.solver.seed},
            {"out", m.out_dir.string()},
            {"nonnegative", m.nonnegative},
            {"samples", m.samples},
            {"validation_samples", m.validation_samples},
            {"embedding_trials", m.embedding_trials},
            {"artifacts", checks}};
  j["lambda"] = m.lambda ? json(*m.lambda) : json(nullptr);
  j["solution"] = m.solution_path ? json(m.solution_path->string()) : json(nullptr);
  return j;
}

}  // namespace

RunResult run(RunManifest& m, std::ostream& log) {
  Context c{m, log, {}, {}};
  m.checksums.clear();
  try {
    const auto& cmds = pipeline_commands();
    if (std::find(cmds.begin(), cmds.end(), m.command) == cmds.end())
      throw Error(ErrorKind::configuration, "unknown command '" + m.command + "'");
    m.solver.validate();
    std::error_code ec;
    fs::create_directories(m.out_dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + m.out_dir.string() + ": " + ec.message());
    fs::remove(m.out_dir / "error.json", ec);

    if (m.command == "bootstrap" && !m.solution_path) throw Error(ErrorKind::configuration, "no solution input");
    c.spec = load_spec(m, log);
    log << m.command << "\n";
    if (m.command == "validate") cmd_validate(c);
    else if (m.command == "solve") cmd_solve(c);
    else if (m.command == "sweep") cmd_sweep(c, c.domain());
    else if (m.command == "eigen") cmd_eigen(c);
    else if (m.command == "verify") cmd_verify(c);
    else if (m.command == "bootstrap") {
      const DiscreteDomain d = c.domain();
      cmd_bootstrap(c, d, read_solution(*m.solution_path, d));
    } else cmd_paper(c);
  } catch (const Error& e) {
    log << "error (" << to_string(e.kind()) << "): " << e.what() << (e.witness().empty() ? "" : " [" + e.witness() + "]")
        << "\n";
    json err = {{"kind", to_string(e.kind())}, {"message", e.what()}, {"witness", e.witness()}};
    c.result.exit_code = 2;
    try {
      std::error_code ec;
      fs::create_directories(m.out_dir, ec);
      write_atomic(m.out_dir / "error.json", err.dump(2) + "\n");
    } catch (const Error&) {
    }
  }
  try {
    write_atomic(m.out_dir / "manifest.json", manifest_json(m).dump(2) + "\n");
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    c.result.exit_code = 2;
  }
  return c.result;
}

}  // namespace vfrac

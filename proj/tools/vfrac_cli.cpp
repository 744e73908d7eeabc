#include "vfrac/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  vfrac::RunManifest m;
  CLI::App app{"Variable-order fractional p(x,y)-Laplacian experiments"};
  app.add_option("command", m.command, "validate | solve | sweep | eigen | verify | bootstrap | paper")
      ->required()
      ->check(CLI::IsMember(vfrac::pipeline_commands()));
  app.add_option("--spec", m.spec_path, "problem file (default: built-in reference problem)");
  app.add_option("--cells", m.cells, "cells per axis")->check(CLI::PositiveNumber);
  app.add_option("--collar-factor", m.collar_factor, "collar radius as a multiple of diam(Omega)")
      ->check(CLI::NonNegativeNumber);
  auto* lam = app.add_option("--lambda", m.lambda, "lambda (default: from the problem)");
  app.add_option("--lambda-grid", m.lambda_grid, "sweep grid")->delimiter(',')->excludes(lam);
  app.add_option("--seed", m.solver.seed, "random seed");
  app.add_option("--out", m.out_dir, "output directory");
  app.add_option("--tol", m.solver.grad_tol, "gradient tolerance")->check(CLI::PositiveNumber);
  std::string solution;
  app.add_option("--solution", solution, "solution JSON for bootstrap");
  app.add_flag("--nonnegative", m.nonnegative, "solve the truncated problem");
  app.add_option("--samples", m.samples, "samples per inequality suite")->check(CLI::PositiveNumber);
  app.add_option("--embedding-trials", m.embedding_trials, "random starts for the embedding estimate")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  if (!solution.empty()) m.solution_path = solution;

  const vfrac::RunResult r = vfrac::run(m, std::cout);
  if (r.exit_code == 1) {
    std::cerr << "failed checks:\n";
    for (const auto& f : r.failed_assertions) std::cerr << "  " << f << "\n";
  }
  return r.exit_code;
}

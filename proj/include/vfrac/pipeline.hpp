#ifndef VFRAC_PIPELINE_HPP
#define VFRAC_PIPELINE_HPP

#include "vfrac/io.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace vfrac {

/// Everything a run depends on. Identical manifests reproduce identical artifacts.
struct RunManifest {
  std::string command;    // validate | solve | sweep | eigen | verify | bootstrap | paper
  std::string spec_path;  // empty: the built-in reference problem
  int cells = 32;
  double collar_factor = 1.0;
  std::optional<double> lambda;  // default: the problem file's lambda
  std::vector<double> lambda_grid;
  SolverConfig solver;
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> solution_path;
  bool nonnegative = false;
  long samples = 10000;
  int validation_samples = 1024;
  int embedding_trials = 1000;

  /// Filled by run(): artifact name -> sha256.
  std::map<std::string, std::string> checksums;
};

const std::vector<std::string>& pipeline_commands();
const std::vector<double>& default_lambda_grid();

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 an assertion failed, 2 an error was raised
  std::vector<std::string> failed_assertions;
};

/// Runs one pipeline, writes its artifacts and manifest.json into out_dir.
/// On a module error writes error.json and returns exit code 2.
RunResult run(RunManifest& manifest, std::ostream& log);

}  // namespace vfrac

#endif

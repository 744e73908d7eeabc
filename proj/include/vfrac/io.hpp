#ifndef VFRAC_IO_HPP
#define VFRAC_IO_HPP

#include "vfrac/analysis.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vfrac {

struct LoadedProblem {
  ProblemSpec spec;
  std::vector<std::string> warnings;
};

/// Parses the line-based problem format (see docs/problem_format.md).
/// Throws Error(parse) with "line L, column C" on malformed input, unknown or
/// duplicate keys and missing required keys.
LoadedProblem parse_problem(std::string_view text);

/// Throws Error(io) when the file cannot be read.
LoadedProblem load_problem(const std::filesystem::path& path);

/// Shortest text that reads back to the same double (17 significant digits at most).
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);
std::string read_file(const std::filesystem::path& path);

nlohmann::json to_json(const HypothesisReport& report);
nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const Solution& s, const DiscreteDomain& domain);
nlohmann::json to_json(const SweepReport& report);
nlohmann::json to_json(const BootstrapReport& report);
nlohmann::json to_json(const InequalityReport& report);
nlohmann::json to_json(const SolverConfig& config);
nlohmann::json domain_summary(const DiscreteDomain& domain);

/// Node coordinates then the value, one row per interior node.
std::string solution_csv(const Solution& s, const DiscreteDomain& domain);
/// Two columns: exponent gamma_m theta-, norm.
std::string bootstrap_csv(const BootstrapReport& report);
std::string sweep_csv(const SweepReport& report);

/// Reads the "u" array of a solution JSON file and checks it against the grid.
GridFunction read_solution(const std::filesystem::path& path, const DiscreteDomain& domain);

}  // namespace vfrac

#endif

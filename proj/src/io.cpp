#include "vfrac/io.hpp"

#include "vfrac/expression.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace vfrac {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Entry {
  int line = 0;
  int column = 0;  // 1-based column of the value
  std::string value;
};

[[noreturn]] void fail_at(int line, int column, const std::string& msg) {
  throw Error(ErrorKind::parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
}

std::string trim(std::string_view s, int* lead = nullptr) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  if (lead) *lead = static_cast<int>(a);
  return std::string(s.substr(a, b - a));
}

double parse_number(std::string_view text, const Entry& e, int offset) {
  int lead = 0;
  const std::string t = trim(text, &lead);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    fail_at(e.line, e.column + offset + lead, "expected a number, got '" + t + "'");
  return v;
}

/// Splits on a separator, reporting the column offset of each piece.
std::vector<std::pair<std::string, int>> split(const std::string& s, char sep) {
  std::vector<std::pair<std::string, int>> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i)
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start), static_cast<int>(start));
      start = i + 1;
    }
  return out;
}

/// "[lo, hi]" at a column offset.
std::pair<double, double> parse_interval(const std::string& text, const Entry& e, int offset) {
  int lead = 0;
  const std::string t = trim(text, &lead);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    fail_at(e.line, e.column + offset + lead, "expected an interval [lo, hi]");
  const auto parts = split(t.substr(1, t.size() - 2), ',');
  if (parts.size() != 2) fail_at(e.line, e.column + offset + lead, "an interval has exactly two endpoints");
  const double lo = parse_number(parts[0].first, e, offset + lead + 1 + parts[0].second);
  const double hi = parse_number(parts[1].first, e, offset + lead + 1 + parts[1].second);
  if (!(lo < hi)) fail_at(e.line, e.column + offset + lead, "interval needs lo < hi");
  return {lo, hi};
}

Expression parse_formula(const std::string& text, const Entry& e, int offset, int dimension) {
  try {
    return Expression::parse(text, dimension);
  } catch (const Error& err) {
    int col = 1;
    std::sscanf(err.what(), "formula column %d", &col);
    std::string msg = err.what();
    const auto colon = msg.find(": ");
    if (colon != std::string::npos) msg = msg.substr(colon + 2);
    fail_at(e.line, e.column + offset + col - 1, msg);
  }
}

/// Probe points for bounds and symmetry: an 11-per-axis lattice on the closed box plus Halton points.
std::vector<Point> probe_points(const Box& box) {
  std::vector<Point> pts;
  const int m = 11;
  const int m1 = box.dimension == 2 ? m : 1;
  for (int j = 0; j < m1; ++j)
    for (int i = 0; i < m; ++i) {
      Point x = Point::Zero();
      x[0] = box.lo[0] + box.side(0) * i / (m - 1.0);
      if (box.dimension == 2) x[1] = box.lo[1] + box.side(1) * j / (m - 1.0);
      pts.push_back(x);
    }
  HaltonSequence h(box.dimension);
  for (int k = 0; k < 256; ++k) {
    const Eigen::Vector4d u = h.next();
    Point x = Point::Zero();
    for (int a = 0; a < box.dimension; ++a) x[a] = box.lo[a] + box.side(a) * u[a];
    pts.push_back(x);
  }
  return pts;
}

std::pair<double, double> padded(double lo, double hi) {
  const double pad = 0.01 * (hi - lo);
  return {lo - pad, hi + pad};
}

ExponentField1 field1(const Expression& ex, const std::optional<std::pair<double, double>>& bounds,
                      const std::vector<Point>& probes) {
  auto eval = [ex](const Point& x) { return ex(x); };
  if (bounds) return ExponentField1::from(eval, bounds->first, bounds->second);
  if (ex.is_constant()) return ExponentField1::constant(ex(Point::Zero()));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Point& x : probes) {
    const double v = ex(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const auto [a, b] = padded(lo, hi);
  return ExponentField1::from(eval, a, b);
}

ExponentField2 field2(const Expression& ex, const std::optional<std::pair<double, double>>& bounds,
                      const std::vector<Point>& probes, const char* name, std::vector<std::string>& warnings) {
  if (ex.is_constant() && !bounds) return ExponentField2::constant(ex(Point::Zero(), Point::Zero()));
  auto g = [ex](const Point& x, const Point& y) { return ex(x, y); };
  bool asymmetric = false;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Point& x : probes)
    for (const Point& y : probes) {
      const double a = g(x, y), b = g(y, x);
      if (std::abs(a - b) > 1e-14 * (1.0 + std::abs(a))) asymmetric = true;
      const double v = 0.5 * (a + b);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (asymmetric)
    warnings.push_back(std::string("field ") + name + " is not symmetric; using (g(x,y) + g(y,x)) / 2");
  if (bounds) return ExponentField2::symmetrized(g, bounds->first, bounds->second);
  const auto [a, b] = padded(lo, hi);
  return ExponentField2::symmetrized(g, a, b);
}

const std::set<std::string> kKeys = {"dimension", "omega",    "s",      "p",       "alpha",    "r",
                                     "lambda",    "term",     "growth_bound", "ar", "t_star",
                                     "s_bounds",  "p_bounds", "alpha_bounds", "r_bounds"};

}  // namespace

LoadedProblem parse_problem(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::vector<Entry> terms;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    int lead = 0;
    if (eq == std::string::npos) {
      trim(line, &lead);
      fail_at(line_no, lead + 1, "expected 'key = value'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq), &lead);
    if (!kKeys.count(key)) fail_at(line_no, lead + 1, "unknown key '" + key + "'");
    int vlead = 0;
    Entry e;
    e.line = line_no;
    e.value = trim(std::string_view(line).substr(eq + 1), &vlead);
    e.column = static_cast<int>(eq) + 2 + vlead;
    if (e.value.empty()) fail_at(line_no, e.column, "empty value for '" + key + "'");
    if (key == "term") {
      terms.push_back(e);
    } else {
      if (entries.count(key)) fail_at(line_no, lead + 1, "duplicate key '" + key + "'");
      entries[key] = e;
    }
    if (end == text.size()) break;
  }

  for (const char* required : {"dimension", "omega", "s", "p", "alpha", "r"})
    if (!entries.count(required))
      throw Error(ErrorKind::parse, std::string("missing required key '") + required + "'", required);

  LoadedProblem out;
  ProblemSpec& spec = out.spec;
  {
    const Entry& e = entries["dimension"];
    const double d = parse_number(e.value, e, 0);
    if (d != 1.0 && d != 2.0) fail_at(e.line, e.column, "dimension must be 1 or 2");
    spec.dimension = static_cast<int>(d);
  }
  {
    const Entry& e = entries["omega"];
    std::vector<std::pair<std::string, int>> axes;
    // "[a,b] x [c,d]" or "[a,b], [c,d]"
    std::size_t start = 0;
    for (std::size_t i = 0; i < e.value.size(); ++i)
      if (e.value[i] == ']') {
        std::string piece = e.value.substr(start, i + 1 - start);
        int lead = 0;
        std::string t = trim(piece, &lead);
        int off = static_cast<int>(start) + lead;
        if (!axes.empty()) {
          if (t.empty() || (t[0] != 'x' && t[0] != ',')) fail_at(e.line, e.column + off, "expected 'x' between axes");
          int l2 = 0;
          t = trim(std::string_view(t).substr(1), &l2);
          off += 1 + l2;
        }
        axes.emplace_back(t, off);
        start = i + 1;
      }
    if (!trim(std::string_view(e.value).substr(start)).empty()) fail_at(e.line, e.column + static_cast<int>(start), "trailing text after omega");
    if (static_cast<int>(axes.size()) != spec.dimension)
      fail_at(e.line, e.column, "omega needs one interval per axis");
    spec.omega.dimension = spec.dimension;
    for (int a = 0; a < spec.dimension; ++a) {
      const auto [lo, hi] = parse_interval(axes[static_cast<std::size_t>(a)].first, e, axes[static_cast<std::size_t>(a)].second);
      spec.omega.lo[a] = lo;
      spec.omega.hi[a] = hi;
    }
  }
  const std::vector<Point> probes = probe_points(spec.omega);
  auto bounds_of = [&](const std::string& name) -> std::optional<std::pair<double, double>> {
    const auto it = entries.find(name + "_bounds");
    if (it == entries.end()) return std::nullopt;
    return parse_interval(it->second.value, it->second, 0);
  };
  auto formula = [&](const char* name) { const Entry& e = entries[name]; return parse_formula(e.value, e, 0, spec.dimension); };
  auto one_point = [&](const char* name) {
    const Expression ex = formula(name);
    if (ex.uses_y()) fail_at(entries[name].line, entries[name].column, std::string(name) + " may not depend on y");
    return field1(ex, bounds_of(name), probes);
  };

  spec.s = field2(formula("s"), bounds_of("s"), probes, "s", out.warnings);
  spec.p = field2(formula("p"), bounds_of("p"), probes, "p", out.warnings);
  spec.alpha = one_point("alpha");
  spec.r = one_point("r");

  NonlinearitySpec& nl = spec.nonlinearity;
  for (const Entry& e : terms) {
    const auto parts = split(e.value, ';');
    if (parts.size() < 2 || parts.size() > 3) fail_at(e.line, e.column, "term = coefficient ; exponent [; odd|positive]");
    int lead = 0;
    const std::string cs = trim(parts[0].first, &lead);
    const Expression coeff = parse_formula(cs, e, parts[0].second + lead, spec.dimension);
    const std::string es = trim(parts[1].first, &lead);
    const Expression expo = parse_formula(es, e, parts[1].second + lead, spec.dimension);
    if (coeff.uses_y() || expo.uses_y()) fail_at(e.line, e.column, "term fields may not depend on y");
    PowerTerm t;
    t.coefficient = [coeff](const Point& x) { return coeff(x); };
    t.exponent = field1(expo, std::nullopt, probes);
    if (parts.size() == 3) {
      const std::string mode = trim(parts[2].first, &lead);
      if (mode == "odd") t.mode = SignMode::odd_power;
      else if (mode == "positive") t.mode = SignMode::positive_part;
      else fail_at(e.line, e.column + parts[2].second + lead, "sign mode must be 'odd' or 'positive'");
    }
    nl.terms.push_back(std::move(t));
  }
  if (entries.count("growth_bound")) nl.growth_bound = parse_number(entries["growth_bound"].value, entries["growth_bound"], 0);
  if (entries.count("t_star")) nl.t_star = parse_number(entries["t_star"].value, entries["t_star"], 0);
  nl.ar_b = spec.r.declared_min;
  if (entries.count("ar")) {
    const Entry& e = entries["ar"];
    const auto parts = split(e.value, ',');
    if (parts.size() != 2) fail_at(e.line, e.column, "ar = a, b");
    nl.ar_a = parse_number(parts[0].first, e, parts[0].second);
    nl.ar_b = parse_number(parts[1].first, e, parts[1].second);
  }
  if (entries.count("lambda")) {
    const Entry& e = entries["lambda"];
    spec.lambda = parse_number(e.value, e, 0);
    if (!(spec.lambda >= 0.0)) fail_at(e.line, e.column, "lambda must be >= 0");
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

LoadedProblem load_problem(const fs::path& path) {
  return parse_problem(read_file(path));
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::io, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::io, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

namespace {

json point_json(const Point& x, int n) {
  json a = json::array();
  for (int k = 0; k < n; ++k) a.push_back(x[k]);
  return a;
}

json number(double v) {
  return std::isfinite(v) ? json(v) : json(format_double(v));
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v[i]));
  return a;
}

json vector_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

}  // namespace

json to_json(const HypothesisReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j = {{"name", c.name}, {"passed", c.passed}, {"worst_margin", number(c.worst_margin)}, {"detail", c.detail}};
    if (c.witness) j["witness"] = {point_json(c.witness->first, 2), point_json(c.witness->second, 2)};
    checks.push_back(j);
  }
  return {{"sample_count", r.sample_count},
          {"admissible", r.admissible},
          {"multiplicity_eligible", r.multiplicity_eligible},
          {"regularity_eligible", r.regularity_eligible},
          {"min_critical_exponent", number(r.min_critical_exponent)},
          {"checks", checks}};
}

json to_json(const EnergyBreakdown& e) {
  return {{"gagliardo_term", number(e.gagliardo_term)},
          {"concave_term", number(e.concave_term)},
          {"convex_term", number(e.convex_term)},
          {"total", number(e.total)}};
}

json to_json(const Solution& s, const DiscreteDomain& domain) {
  json nodes = json::array();
  for (const Point& x : domain.interior_nodes) nodes.push_back(point_json(x, domain.dimension));
  json j = {{"kind", to_string(s.kind)},
            {"energy", number(s.energy)},
            {"grad_norm", number(s.grad_norm)},
            {"converged", s.converged},
            {"iterations", s.iterations},
            {"linf_norm", number(s.linf_norm)},
            {"min_value", number(s.min_value)},
            {"x0_norm", number(s.x0_norm)},
            {"note", s.note},
            {"cells_per_axis", domain.cells_per_axis},
            {"nodes", nodes},
            {"u", vector_json(s.u)}};
  if (s.morse_index) j["morse_index"] = *s.morse_index;
  if (s.eigenvalue) j["eigenvalue"] = number(*s.eigenvalue);
  if (s.ball_radius) j["ball_radius"] = number(*s.ball_radius);
  if (s.auxiliary) j[s.kind == SolutionKind::eigenfunction ? "constraint_residual" : "endpoint_scale"] = number(*s.auxiliary);
  return j;
}

json to_json(const SweepReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = {{"lambda", row.lambda},
              {"local_min_found", row.local_min_found},
              {"local_min_energy", number(row.local_min_energy)},
              {"mountain_pass_found", row.mountain_pass_found},
              {"mountain_pass_energy", number(row.mountain_pass_energy)},
              {"distinct", row.distinct},
              {"separation", number(row.separation)},
              {"failure", row.failure}};
    if (row.local_min) j["local_min_grad_norm"] = number(row.local_min->grad_norm);
    if (row.mountain_pass) j["mountain_pass_grad_norm"] = number(row.mountain_pass->grad_norm);
    rows.push_back(j);
  }
  json j = {{"rows", rows}};
  j["lambda_star"] = r.lambda_star ? json(*r.lambda_star) : json(nullptr);
  return j;
}

json to_json(const BootstrapReport& r) {
  return {{"gammas", vector_json(r.gammas)},
          {"exponents", vector_json(r.exponents)},
          {"norms", vector_json(r.norms)},
          {"bounds", vector_json(r.bounds)},
          {"base_norm", number(r.base_norm)},
          {"constant", number(r.constant)},
          {"theta_minus", number(r.theta_minus)},
          {"r_plus", number(r.r_plus)},
          {"p_minus", number(r.p_minus)},
          {"linf", number(r.linf)},
          {"bound_chain_ok", r.bound_chain_ok},
          {"ladder_monotone", r.ladder_monotone},
          {"trivial", r.trivial}};
}

json to_json(const InequalityReport& r) {
  json j = {{"name", r.name},
            {"samples", r.samples},
            {"violations", r.violations},
            {"worst_margin", number(r.worst_margin)}};
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
  return j;
}

json to_json(const SolverConfig& c) {
  json j = {{"max_iters", c.max_iters},
            {"grad_tol", c.grad_tol},
            {"armijo_c", c.armijo_c},
            {"backtrack", c.backtrack},
            {"initial_step", c.initial_step},
            {"path_points", c.path_points},
            {"seed", c.seed},
            {"xi", {{"shape", c.xi.shape}, {"amplitude", c.xi.amplitude}}},
            {"phi", {{"shape", c.phi.shape}, {"amplitude", c.phi.amplitude}}},
            {"polish_switch", c.polish_switch},
            {"newton_iters", c.newton_iters},
            {"eigen_restarts", c.eigen_restarts}};
  j["ball_radius"] = c.ball_radius ? json(*c.ball_radius) : json(nullptr);
  return j;
}

json domain_summary(const DiscreteDomain& d) {
  json interior = json::array(), collar = json::array();
  for (const Point& x : d.interior_nodes) interior.push_back(point_json(x, d.dimension));
  for (const Point& x : d.collar_nodes) collar.push_back(point_json(x, d.dimension));
  return {{"dimension", d.dimension},
          {"h", d.h},
          {"cell_measure", d.cell_measure},
          {"collar_radius", d.collar_radius},
          {"interior_count", d.interior_nodes.size()},
          {"collar_count", d.collar_nodes.size()},
          {"collar_pairs", d.collar_partners.size()},
          {"interior_nodes", interior},
          {"collar_nodes", collar}};
}

std::string solution_csv(const Solution& s, const DiscreteDomain& d) {
  std::string out = d.dimension == 1 ? "x1,u\n" : "x1,x2,u\n";
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const Point& x = d.interior_nodes[static_cast<std::size_t>(i)];
    out += format_double(x[0]) + ",";
    if (d.dimension == 2) out += format_double(x[1]) + ",";
    out += format_double(s.u[i]) + "\n";
  }
  return out;
}

std::string bootstrap_csv(const BootstrapReport& r) {
  std::string out = "exponent,norm\n";
  for (std::size_t k = 0; k < r.norms.size(); ++k)
    out += format_double(r.exponents[k]) + "," + format_double(r.norms[k]) + "\n";
  return out;
}

std::string sweep_csv(const SweepReport& r) {
  std::string out = "lambda,local_min_found,local_min_energy,mountain_pass_found,mountain_pass_energy,distinct,separation\n";
  for (const auto& row : r.rows)
    out += format_double(row.lambda) + "," + (row.local_min_found ? "1" : "0") + "," +
           format_double(row.local_min_energy) + "," + (row.mountain_pass_found ? "1" : "0") + "," +
           format_double(row.mountain_pass_energy) + "," + (row.distinct ? "1" : "0") + "," +
           format_double(row.separation) + "\n";
  return out;
}

GridFunction read_solution(const fs::path& path, const DiscreteDomain& domain) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, "solution file is not valid JSON: " + std::string(e.what()), path.string());
  }
  if (!j.contains("u") || !j["u"].is_array()) throw Error(ErrorKind::parse, "solution file has no 'u' array", path.string());
  const auto& a = j["u"];
  if (static_cast<Eigen::Index>(a.size()) != domain.size())
    throw Error(ErrorKind::configuration,
                "solution has " + std::to_string(a.size()) + " values, grid has " + std::to_string(domain.size()),
                path.string());
  GridFunction u(domain.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (!a[static_cast<std::size_t>(i)].is_number()) throw Error(ErrorKind::parse, "non-numeric entry in 'u'", path.string());
    u[i] = a[static_cast<std::size_t>(i)].get<double>();
  }
  return u;
}

}  // namespace vfrac

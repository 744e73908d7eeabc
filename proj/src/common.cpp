#include "vfrac/common.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace vfrac {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::evaluator: return "evaluator";
    case ErrorKind::domain: return "domain";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::parse: return "parse";
    case ErrorKind::build: return "build";
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

std::string format_point(const Point& x, int dimension) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int k = 0; k < dimension; ++k) {
    if (k) os << ", ";
    os << x[k];
  }
  os << ')';
  return os.str();
}

double Box::measure() const {
  double m = 1.0;
  for (int k = 0; k < dimension; ++k) m *= side(k);
  return m;
}

double Box::diameter() const {
  double d2 = 0.0;
  for (int k = 0; k < dimension; ++k) d2 += side(k) * side(k);
  return std::sqrt(d2);
}

bool Box::contains_open(const Point& x) const {
  for (int k = 0; k < dimension; ++k)
    if (!(x[k] > lo[k] && x[k] < hi[k])) return false;
  return true;
}

bool Box::contains_closed(const Point& x) const {
  for (int k = 0; k < dimension; ++k)
    if (!(x[k] >= lo[k] && x[k] <= hi[k])) return false;
  return true;
}

double Box::distance_outside(const Point& x) const {
  double d2 = 0.0;
  for (int k = 0; k < dimension; ++k) {
    const double e = std::max({lo[k] - x[k], 0.0, x[k] - hi[k]});
    d2 += e * e;
  }
  return std::sqrt(d2);
}

Point Box::clamp(const Point& x) const {
  Point y = x;
  for (int a = 0; a < dimension; ++a) y[a] = std::clamp(x[a], lo[a], hi[a]);
  return y;
}

double Box::distance_to_boundary(const Point& x) const {
  double d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < dimension; ++k) d = std::min({d, x[k] - lo[k], hi[k] - x[k]});
  return std::max(d, 0.0);
}

namespace {

constexpr int kPrimes[4] = {2, 3, 5, 7};

double radical_inverse(std::size_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % static_cast<std::size_t>(base));
    i /= static_cast<std::size_t>(base);
    f *= inv;
  }
  return r;
}

}  // namespace

HaltonSequence::HaltonSequence(int dimension, std::size_t skip)
    : dimension_(dimension), index_(skip) {
  if (dimension < 1 || dimension > 4)
    throw Error(ErrorKind::configuration, "Halton sequence supports 1..4 dimensions");
}

Eigen::Vector4d HaltonSequence::next() {
  Eigen::Vector4d v = Eigen::Vector4d::Zero();
  for (int k = 0; k < dimension_; ++k) v[k] = radical_inverse(index_, kPrimes[k]);
  ++index_;
  return v;
}

}  // namespace vfrac

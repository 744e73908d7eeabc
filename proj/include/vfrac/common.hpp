#ifndef VFRAC_COMMON_HPP
#define VFRAC_COMMON_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vfrac {

/// Points live in R^2; for one-dimensional problems the second coordinate is 0.
using Point = Eigen::Vector2d;

/// Values on interior grid nodes. Implicitly zero on the collar and beyond.
using GridFunction = Eigen::VectorXd;

enum class ErrorKind {
  configuration,
  evaluator,
  domain,
  numeric,
  parse,
  build,
  geometry,
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what, std::string witness = {})
      : std::runtime_error(what), kind_(kind), witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& witness() const noexcept { return witness_; }

private:
  ErrorKind kind_;
  std::string witness_;
};

std::string format_point(const Point& x, int dimension);

/// Axis-aligned box Omega = prod_k (lo_k, hi_k), k < dimension.
struct Box {
  int dimension = 1;
  Point lo = Point::Zero();
  Point hi = Point::Zero();

  double side(int axis) const { return hi[axis] - lo[axis]; }
  double measure() const;
  double diameter() const;
  bool contains_open(const Point& x) const;
  bool contains_closed(const Point& x) const;
  /// Distance from x to the box; 0 inside.
  double distance_outside(const Point& x) const;
  /// Distance from an interior point to the boundary.
  double distance_to_boundary(const Point& x) const;
  /// Nearest point of the closed box.
  Point clamp(const Point& x) const;
  Point center() const { return 0.5 * (lo + hi); }
};

/// Surface measure of the unit sphere in R^n (two points for n = 1).
inline double unit_sphere_measure(int n) {
  return n == 1 ? 2.0 : 2.0 * M_PI;
}

/// |t|^{e-2} t with the value 0 at t = 0.
template <typename Scalar>
Scalar signed_power(Scalar t, Scalar e) {
  if (t == Scalar(0)) return Scalar(0);
  using std::abs;
  using std::pow;
  if (e == Scalar(2)) return t;
  return pow(abs(t), e - Scalar(2)) * t;
}

/// |t|^e, with exact squaring for e == 2.
template <typename Scalar>
Scalar abs_power(Scalar t, Scalar e) {
  using std::abs;
  using std::pow;
  if (e == Scalar(2)) return t * t;
  if (t == Scalar(0)) return Scalar(0);
  return pow(abs(t), e);
}

/// Fixed-order pairwise summation. The split points depend only on the
/// length, so the result is reproducible bit for bit.
template <typename Scalar>
Scalar tree_sum(std::span<const Scalar> values) {
  const std::size_t n = values.size();
  if (n <= 8) {
    Scalar acc(0);
    for (const Scalar& v : values) acc += v;
    return acc;
  }
  const std::size_t half = n / 2;
  return tree_sum(values.first(half)) + tree_sum(values.subspan(half));
}

template <typename Scalar>
Scalar tree_sum(const std::vector<Scalar>& values) {
  return tree_sum(std::span<const Scalar>(values.data(), values.size()));
}

inline double tree_sum(const Eigen::VectorXd& values) {
  return tree_sum(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

/// Radical-inverse Halton sequence; deterministic low-discrepancy samples in [0,1)^d.
class HaltonSequence {
public:
  explicit HaltonSequence(int dimension, std::size_t skip = 1);
  /// Next sample; only the first `dimension` entries are meaningful.
  Eigen::Vector4d next();

private:
  int dimension_;
  std::size_t index_;
};

}  // namespace vfrac

#endif

#include "vfrac/presets.hpp"

namespace vfrac::presets {

namespace {

NonlinearitySpec single_power(double exponent, SignMode mode) {
  NonlinearitySpec nl;
  nl.terms.push_back({[](const Point&) { return 1.0; }, ExponentField1::constant(exponent), mode});
  nl.growth_bound = 1.0;
  nl.ar_a = 1.0;
  nl.ar_b = exponent;
  nl.t_star = 1.0;
  return nl;
}

}  // namespace

ProblemSpec spec_a(SignMode mode) {
  ProblemSpec spec;
  spec.dimension = 1;
  spec.omega.dimension = 1;
  spec.omega.lo = Point(0.0, 0.0);
  spec.omega.hi = Point(1.0, 0.0);
  spec.s = ExponentField2::constant(0.4);
  spec.p = ExponentField2::constant(2.0);
  spec.alpha = ExponentField1::constant(1.5);
  spec.r = ExponentField1::constant(3.5);
  spec.nonlinearity = single_power(3.5, mode);
  spec.lambda = 0.05;
  return spec;
}

ProblemSpec spec_a_2d() {
  ProblemSpec spec = spec_a();
  spec.dimension = 2;
  spec.omega.dimension = 2;
  spec.omega.lo = Point(0.0, 0.0);
  spec.omega.hi = Point(1.0, 1.0);
  return spec;
}

ProblemSpec spec_variable() {
  ProblemSpec spec = spec_a();
  spec.s = ExponentField2::symmetrized(
      [](const Point& x, const Point& y) { return 0.25 + 0.05 * (x[0] + y[0]); }, 0.25, 0.35);
  spec.p = ExponentField2::symmetrized(
      [](const Point& x, const Point& y) { return 2.0 + 0.25 * (x[0] + y[0]); }, 2.0, 2.5);
  return spec;
}

}  // namespace vfrac::presets

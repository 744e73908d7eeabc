#ifndef VFRAC_PRESETS_HPP
#define VFRAC_PRESETS_HPP

#include "vfrac/problem.hpp"

namespace vfrac::presets {

/// Omega = (0,1), s = 0.4, p = 2, alpha = 1.5, f(t) = |t|^{1.5} t (r = 3.5),
/// M = 1, a = 1, b = 3.5, t* = 1, lambda = 0.05.
ProblemSpec spec_a(SignMode mode = SignMode::odd_power);

/// The same data on the unit square (sp = 0.8 < 2).
ProblemSpec spec_a_2d();

/// Omega = (0,1), s(x,y) = 0.25 + 0.05 (x + y), p(x,y) = 2 + 0.25 (x + y),
/// so p ranges over [2, 2.5] and sp <= 0.875. Otherwise as spec_a.
ProblemSpec spec_variable();

}  // namespace vfrac::presets

#endif

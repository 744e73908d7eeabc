#include "vfrac/domain.hpp"

#include <cmath>

namespace vfrac {

double radial_tail(int dimension, double sp, double radius) {
  return unit_sphere_measure(dimension) * std::pow(radius, -sp) / sp;
}

double tail_weight(const DiscreteDomain& domain, const ProblemSpec& spec, const Point& x) {
  const double radius = domain.collar_radius + domain.omega.distance_to_boundary(x);
  return radial_tail(domain.dimension, spec.s(x, x) * spec.p(x, x), radius);
}

namespace {

/// s and p are evaluated at (a, clamp(b)): outside Omega they take their value
/// at the nearest point of the closed box.
double pair_weight(const DiscreteDomain& d, const ProblemSpec& spec, const Point& a, const Point& b,
                   double& exponent) {
  const Point bc = d.omega.clamp(b);
  const double s = spec.s(a, bc);
  exponent = spec.p(a, bc);
  const double dist = (a - b).norm();
  const double w = std::pow(d.cell_measure, 2) / std::pow(dist, d.dimension + s * exponent);
  if (!std::isfinite(w) || !(w > 0.0) || !std::isfinite(exponent))
    throw Error(ErrorKind::build, "pair weight is not finite and positive",
                format_point(a, d.dimension) + " " + format_point(b, d.dimension));
  return w;
}

}  // namespace

DiscreteDomain build_domain(const ProblemSpec& spec, int cells_per_axis, double collar_factor) {
  if (cells_per_axis < 2) throw Error(ErrorKind::configuration, "cells_per_axis must be >= 2");
  if (!(collar_factor >= 1.0)) throw Error(ErrorKind::configuration, "collar_factor must be >= 1");
  if (spec.dimension != 1 && spec.dimension != 2)
    throw Error(ErrorKind::configuration, "dimension must be 1 or 2");
  if (spec.omega.dimension != spec.dimension)
    throw Error(ErrorKind::configuration, "omega dimension does not match problem dimension");
  if (spec.dimension == 2 && std::abs(spec.omega.side(0) - spec.omega.side(1)) >
                                 1e-12 * std::max(spec.omega.side(0), spec.omega.side(1)))
    throw Error(ErrorKind::configuration, "the uniform grid needs a square box in 2D");

  DiscreteDomain d;
  d.dimension = spec.dimension;
  d.omega = spec.omega;
  d.cells_per_axis = cells_per_axis;
  d.h = spec.omega.side(0) / cells_per_axis;
  d.cell_measure = std::pow(d.h, d.dimension);
  d.collar_radius = collar_factor * spec.omega.diameter();

  const int n = d.dimension;
  const int K = static_cast<int>(std::ceil(d.collar_radius / d.h));
  auto node = [&](int i0, int i1) {
    Point x = Point::Zero();
    x[0] = d.omega.lo[0] + (i0 + 0.5) * d.h;
    if (n == 2) x[1] = d.omega.lo[1] + (i1 + 0.5) * d.h;
    return x;
  };

  const int jmax = n == 2 ? cells_per_axis : 1;
  for (int i1 = 0; i1 < jmax; ++i1)
    for (int i0 = 0; i0 < cells_per_axis; ++i0) d.interior_nodes.push_back(node(i0, i1));

  const int lo = -K, hi = cells_per_axis + K;
  const int lo1 = n == 2 ? lo : 0, hi1 = n == 2 ? hi : 1;
  for (int i1 = lo1; i1 < hi1; ++i1)
    for (int i0 = lo; i0 < hi; ++i0) {
      const bool inside = i0 >= 0 && i0 < cells_per_axis && (n == 1 || (i1 >= 0 && i1 < cells_per_axis));
      if (inside) continue;
      const Point x = node(i0, i1);
      if (d.omega.distance_outside(x) <= d.collar_radius) d.collar_nodes.push_back(x);
    }

  const Eigen::Index N = d.size();
  d.interior_weights = Eigen::MatrixXd::Zero(N, N);
  d.interior_exponents = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = i + 1; j < N; ++j) {
      double e = 0.0;
      const double w = pair_weight(d, spec, d.interior_nodes[static_cast<std::size_t>(i)],
                                   d.interior_nodes[static_cast<std::size_t>(j)], e);
      d.interior_weights(i, j) = d.interior_weights(j, i) = w;
      d.interior_exponents(i, j) = d.interior_exponents(j, i) = e;
    }

  d.tail.resize(N);
  d.tail_radius.resize(N);
  d.diagonal_exponent.resize(N);
  d.collar_offsets.assign(1, 0);
  for (Eigen::Index i = 0; i < N; ++i) {
    const Point& xi = d.interior_nodes[static_cast<std::size_t>(i)];
    const double radius = d.collar_radius + d.omega.distance_to_boundary(xi);
    d.tail_radius[i] = radius;
    d.diagonal_exponent[i] = spec.p(xi, xi);
    d.tail[i] = radial_tail(n, spec.s(xi, xi) * d.diagonal_exponent[i], radius);
    for (std::size_t k = 0; k < d.collar_nodes.size(); ++k) {
      const Point& xk = d.collar_nodes[k];
      if ((xk - xi).norm() >= radius) continue;
      double e = 0.0;
      const double w = pair_weight(d, spec, xi, xk, e);
      d.collar_partners.push_back({static_cast<Eigen::Index>(k), w, e});
    }
    d.collar_offsets.push_back(static_cast<Eigen::Index>(d.collar_partners.size()));
  }
  return d;
}

}  // namespace vfrac

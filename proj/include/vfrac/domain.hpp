#ifndef VFRAC_DOMAIN_HPP
#define VFRAC_DOMAIN_HPP

#include "vfrac/problem.hpp"

#include <vector>

namespace vfrac {

/// Kernel partner of an interior node on the collar (where u = 0).
struct CollarPartner {
  Eigen::Index collar_index;
  double weight;    // h^{2n} / |x_i - x_k|^{n + s p}
  double exponent;  // p(x_i, x_k)
};

/// Cell-centred grid on Omega plus the exterior collar within distance R.
///
/// Pair weights fold both cell measures in: w_ij = h^{2n} / |x_i - x_j|^{n + s_ij p_ij},
/// with s_ij = s(x_i, x_j) and p_ij = p(x_i, x_j) frozen at cell centres.
/// The diagonal i = j is excluded. For an interior node x_i the explicit
/// partners are the nodes with |x_j - x_i| < R_i, where R_i = R + dist(x_i, dOmega)
/// is the distance to the outer edge of the collar; the rest of R^n is covered
/// by the analytic tail_weight.
struct DiscreteDomain {
  int dimension = 1;
  Box omega;
  int cells_per_axis = 0;
  double h = 0.0;
  double cell_measure = 0.0;
  double collar_radius = 0.0;

  std::vector<Point> interior_nodes;
  std::vector<Point> collar_nodes;

  /// Symmetric interior-interior weights and exponents, zero diagonal.
  Eigen::MatrixXd interior_weights;
  Eigen::MatrixXd interior_exponents;

  /// CSR lists of collar partners per interior node.
  std::vector<Eigen::Index> collar_offsets;
  std::vector<CollarPartner> collar_partners;

  /// Per interior node: tail weight, truncation radius, p(x_i, x_i).
  Eigen::VectorXd tail;
  Eigen::VectorXd tail_radius;
  Eigen::VectorXd diagonal_exponent;

  Eigen::Index size() const { return static_cast<Eigen::Index>(interior_nodes.size()); }
};

/// Throws Error(configuration) for cells_per_axis < 2, collar_factor < 1 or a
/// non-square box in 2D, Error(build) for a non-finite pair weight.
DiscreteDomain build_domain(const ProblemSpec& spec, int cells_per_axis, double collar_factor);

/// sigma_{n-1} radius^{-sp} / (sp): the kernel mass outside the ball of the given radius.
double radial_tail(int dimension, double sp, double radius);

/// Tail weight at an interior point x, with s, p frozen at (x, x) and the
/// radius equal to the distance from x to the collar's outer boundary.
double tail_weight(const DiscreteDomain& domain, const ProblemSpec& spec, const Point& x);

/// Samples a function of position on the interior nodes.
template <typename F>
GridFunction sample(const DiscreteDomain& domain, F&& f) {
  GridFunction u(domain.size());
  for (Eigen::Index i = 0; i < domain.size(); ++i)
    u[i] = f(domain.interior_nodes[static_cast<std::size_t>(i)]);
  return u;
}

}  // namespace vfrac

#endif

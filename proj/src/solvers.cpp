#include "vfrac/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vfrac {

using Index = Eigen::Index;

GridFunction InitialProfile::sample(const DiscreteDomain& domain) const {
  const Box& box = domain.omega;
  if (shape == "sine")
    return vfrac::sample(domain, [&](const Point& x) {
      double v = amplitude;
      for (int k = 0; k < domain.dimension; ++k) v *= std::sin(M_PI * (x[k] - box.lo[k]) / box.side(k));
      return v;
    });
  if (shape == "gaussian") {
    const double sigma = box.side(0) / 8.0;
    const Point c = box.center();
    return vfrac::sample(domain, [&](const Point& x) {
      return amplitude * std::exp(-(x - c).squaredNorm() / (2.0 * sigma * sigma));
    });
  }
  if (shape == "zero") return GridFunction::Zero(domain.size());
  throw Error(ErrorKind::configuration, "unknown profile shape '" + shape + "'");
}

void SolverConfig::validate() const {
  if (!(grad_tol > 0.0)) throw Error(ErrorKind::configuration, "grad_tol must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw Error(ErrorKind::configuration, "armijo c must lie in (0,1)");
  if (!(backtrack > 0.0 && backtrack < 1.0))
    throw Error(ErrorKind::configuration, "backtrack factor must lie in (0,1)");
  if (!(initial_step > 0.0)) throw Error(ErrorKind::configuration, "initial step must be positive");
  if (ball_radius && !(*ball_radius > 0.0 && *ball_radius <= 1.0))
    throw Error(ErrorKind::configuration, "ball radius must lie in (0,1]");
  if (path_points < 8) throw Error(ErrorKind::configuration, "path_points must be >= 8");
  if (max_iters < 1) throw Error(ErrorKind::configuration, "max_iters must be >= 1");
}

const char* to_string(SolutionKind kind) {
  switch (kind) {
    case SolutionKind::mountain_pass: return "mountain_pass";
    case SolutionKind::local_min: return "local_min";
    case SolutionKind::eigenfunction: return "eigenfunction";
  }
  return "?";
}

UniformStream::UniformStream(std::uint64_t seed) : engine_(seed) {}

double UniformStream::next() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double UniformStream::normal() {
  const double a = 1.0 - next();
  const double b = next();
  return std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * M_PI * b);
}

int morse_index(const EnergyFunctional& J, const GridFunction& u) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J.hessian(u), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int count = 0;
  for (Index i = 0; i < ev.size(); ++i)
    if (ev[i] < -1e-10 * scale) ++count;
  return count;
}

namespace {

struct Polish {
  GridFunction u;
  bool converged = false;
  int iterations = 0;
};

/// Damped Newton on the gradient norm.
Polish newton_polish(const EnergyFunctional& J, GridFunction u, double tol, int max_iters) {
  Polish out;
  GridFunction g = J.gradient(u);
  double gn = g.norm();
  for (int it = 0; it < max_iters; ++it) {
    out.iterations = it;
    if (gn <= tol) {
      out.converged = true;
      break;
    }
    const GridFunction d = J.hessian(u).partialPivLu().solve(-g);
    if (!d.allFinite()) break;
    bool moved = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      const GridFunction trial = u + t * d;
      const GridFunction gt = J.gradient(trial);
      const double n = gt.norm();
      if (n <= (1.0 - 1e-4 * t) * gn) {
        u = trial;
        g = gt;
        gn = n;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  if (gn <= tol) out.converged = true;
  out.u = std::move(u);
  return out;
}

Solution finish(const EnergyFunctional& J, GridFunction u, SolutionKind kind, int iterations, double tol) {
  Solution s;
  s.kind = kind;
  s.iterations = iterations;
  s.energy = J(u);
  s.grad_norm = J.gradient(u).norm();
  s.converged = s.grad_norm <= tol;
  s.linf_norm = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
  s.min_value = u.size() ? u.minCoeff() : 0.0;
  s.x0_norm = x0_norm(u, J.spec(), J.domain()).norm;
  s.morse_index = morse_index(J, u);
  s.u = std::move(u);
  return s;
}

GridFunction project_to_ball(const GridFunction& u, const EnergyFunctional& J, double radius) {
  const double n = x0_norm(u, J.spec(), J.domain()).norm;
  if (n <= radius) return u;
  return u * (radius / n);
}

std::vector<GridFunction> barrier_candidates(const DiscreteDomain& domain, const SolverConfig& config) {
  std::vector<GridFunction> out;
  out.push_back(InitialProfile{"sine", 1.0}.sample(domain));
  out.push_back(InitialProfile{"gaussian", 1.0}.sample(domain));
  UniformStream rng(config.seed);
  const Box& box = domain.omega;
  for (int k = 0; k < 6; ++k) {
    Point c = Point::Zero();
    for (int a = 0; a < domain.dimension; ++a) c[a] = rng.next(box.lo[a] + 0.2 * box.side(a), box.hi[a] - 0.2 * box.side(a));
    const double sigma = box.side(0) * rng.next(0.05, 0.3);
    out.push_back(sample(domain, [&](const Point& x) {
      return std::exp(-(x - c).squaredNorm() / (2.0 * sigma * sigma));
    }));
  }
  return out;
}

}  // namespace

BarrierScan barrier_scan(const EnergyFunctional& J, const SolverConfig& config) {
  BarrierScan scan;
  std::vector<GridFunction> unit;
  for (GridFunction& v : barrier_candidates(J.domain(), config)) {
    const double n = x0_norm(v, J.spec(), J.domain()).norm;
    if (n > 0.0) unit.push_back(v / n);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 10; ++k) {
    const double delta = 0.1 * k;
    double lowest = std::numeric_limits<double>::infinity();
    for (const GridFunction& v : unit) lowest = std::min(lowest, J(delta * v));
    scan.radii.push_back(delta);
    scan.min_energy.push_back(lowest);
    if (lowest > best) {
      best = lowest;
      scan.chosen = delta;
    }
  }
  return scan;
}

Solution find_local_min(const ProblemSpec& spec, const DiscreteDomain& domain, double lambda,
                        const SolverConfig& config, Truncation truncation) {
  config.validate();
  const EnergyFunctional J(spec, domain, lambda, truncation);
  const double tol = config.grad_tol;

  GridFunction u = GridFunction::Zero(domain.size());
  const GridFunction phi = config.phi.sample(domain);
  if (phi.norm() > 0.0) {
    double t = 0.1;
    for (int k = 0; k < 40; ++k, t *= 0.5)
      if (J(t * phi) < 0.0) {
        u = t * phi;
        break;
      }
  }

  GridFunction g = J.gradient(u);
  if (g.norm() <= tol) {
    Solution s = finish(J, u, SolutionKind::local_min, 0, tol);
    if (u.isZero(0.0)) s.note = "start point is critical";
    return s;
  }

  const double delta = config.ball_radius ? *config.ball_radius : barrier_scan(J, config).chosen;
  u = project_to_ball(u, J, delta);
  double e = J(u);
  g = J.gradient(u);

  double switch_tol = std::max(config.polish_switch, tol);
  double step = config.initial_step;
  int it = 0;
  for (; it < config.max_iters; ++it) {
    const double gn = g.norm();
    if (gn <= tol) break;
    if (gn <= switch_tol) {
      const Polish p = newton_polish(J, u, tol, config.newton_iters);
      if (p.converged) {
        const double ep = J(p.u);
        const bool inside = x0_norm(p.u, spec, domain).norm <= delta;
        if (inside && ep <= e + 1e-12 * std::abs(e) && morse_index(J, p.u) == 0) {
          Solution s = finish(J, p.u, SolutionKind::local_min, it + p.iterations, tol);
          s.ball_radius = delta;
          return s;
        }
      }
      switch_tol = std::max(0.1 * switch_tol, tol);
      if (switch_tol == tol) switch_tol = 0.0;
    }

    double t = step;
    bool accepted = false;
    for (int k = 0; k < 80; ++k, t *= config.backtrack) {
      const GridFunction trial = project_to_ball(u - t * g, J, delta);
      const double et = J(trial);
      if (et <= e - config.armijo_c * g.dot(u - trial)) {
        accepted = !(trial - u).isZero(0.0);
        u = trial;
        e = et;
        break;
      }
    }
    if (!accepted) break;
    step = std::min(t / config.backtrack, 1e6 * config.initial_step);
    g = J.gradient(u);
  }

  Solution s = finish(J, u, SolutionKind::local_min, it, tol);
  s.ball_radius = delta;
  if (!s.converged) s.note = it >= config.max_iters ? "max_iters exceeded" : "line search stalled";
  return s;
}

namespace {

/// Resamples the polyline at equal arclength; endpoints stay fixed.
void reparametrize(std::vector<GridFunction>& path) {
  const std::size_t P = path.size();
  std::vector<double> s(P, 0.0);
  for (std::size_t k = 1; k < P; ++k) s[k] = s[k - 1] + (path[k] - path[k - 1]).norm();
  const double total = s.back();
  if (!(total > 0.0)) return;
  std::vector<GridFunction> out(P);
  out.front() = path.front();
  out.back() = path.back();
  std::size_t seg = 0;
  for (std::size_t k = 1; k + 1 < P; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(P - 1);
    while (seg + 2 < P && s[seg + 1] < target) ++seg;
    const double len = s[seg + 1] - s[seg];
    const double a = len > 0.0 ? (target - s[seg]) / len : 0.0;
    out[k] = (1.0 - a) * path[seg] + a * path[seg + 1];
  }
  path.swap(out);
}

/// SPD matrix of the linear (p = 2) kernel on the grid, used to precondition
/// descent directions: L_ij = -w_ij, L_ii = sum_j w_ij + collar + h^n tail_i.
Eigen::LLT<Eigen::MatrixXd> kernel_preconditioner(const DiscreteDomain& d) {
  const Index N = d.size();
  Eigen::MatrixXd L = -d.interior_weights;
  for (Index i = 0; i < N; ++i) {
    double diag = d.interior_weights.row(i).sum() + d.cell_measure * d.tail[i];
    for (Index k = d.collar_offsets[static_cast<std::size_t>(i)]; k < d.collar_offsets[static_cast<std::size_t>(i) + 1]; ++k)
      diag += d.collar_partners[static_cast<std::size_t>(k)].weight;
    L(i, i) = diag;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(L);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::numeric, "kernel preconditioner is not positive definite");
  return llt;
}

}  // namespace

Solution mountain_pass(const ProblemSpec& spec, const DiscreteDomain& domain, double lambda,
                       const SolverConfig& config, Truncation truncation) {
  config.validate();
  const EnergyFunctional J(spec, domain, lambda, truncation);
  const double tol = config.grad_tol;
  const GridFunction xi = config.xi.sample(domain);
  if (!(xi.norm() > 0.0)) throw Error(ErrorKind::configuration, "mountain-pass direction xi is zero");

  double T = 1.0;
  bool found = false;
  for (int k = 0; k < 60 && !found; ++k) {
    if (J(T * xi) < 0.0) found = true;
    else T *= 2.0;
  }
  if (!found) {
    const GridFunction zero = GridFunction::Zero(domain.size());
    if (J.gradient(zero).norm() <= tol) {
      Solution s = finish(J, zero, SolutionKind::mountain_pass, 0, tol);
      s.note = "J(T xi) >= 0 for every tried T; returning the critical point u = 0";
      return s;
    }
    throw Error(ErrorKind::geometry, "no endpoint T xi with negative energy", "T up to " + std::to_string(T));
  }

  const int P = config.path_points;
  std::vector<GridFunction> path(static_cast<std::size_t>(P));
  std::vector<double> energy(static_cast<std::size_t>(P));
  auto refresh = [&] {
    for (std::size_t k = 0; k < path.size(); ++k) energy[k] = J(path[k]);
  };
  for (int k = 0; k < P; ++k) path[static_cast<std::size_t>(k)] = (T * k / (P - 1.0)) * xi;
  refresh();

  const Eigen::LLT<Eigen::MatrixXd> riesz = kernel_preconditioner(domain);
  int next_attempt = 25;
  double switch_tol = std::max(config.polish_switch, tol);
  double step = config.initial_step;
  int it = 0;
  for (; it < config.max_iters; ++it) {
    const std::size_t top = static_cast<std::size_t>(std::max_element(energy.begin(), energy.end()) - energy.begin());
    if (top == 0 || top + 1 == path.size())
      throw Error(ErrorKind::geometry, "path maximum reached an endpoint; try a larger T or a smaller lambda",
                  "iteration " + std::to_string(it) + ", T = " + std::to_string(T));
    GridFunction& v = path[top];
    const GridFunction g = J.gradient(v);
    const double gn = g.norm();
    if (gn <= tol && energy[top] > 0.0 && morse_index(J, v) == 1) {
      Solution s = finish(J, v, SolutionKind::mountain_pass, it, tol);
      s.auxiliary = T;
      return s;
    }
    // the vertex maximum can settle below the saddle when the path crosses the
    // ridge between vertices, so Newton is also tried on a doubling schedule
    const bool scheduled = it + 1 == next_attempt;
    if (scheduled) next_attempt *= 2;
    if (gn <= switch_tol || scheduled) {
      const Polish p = newton_polish(J, v, tol, config.newton_iters);
      if (p.converged && J(p.u) > 0.0 && morse_index(J, p.u) == 1) {
        Solution s = finish(J, p.u, SolutionKind::mountain_pass, it + p.iterations, tol);
        s.auxiliary = T;
        return s;
      }
      if (!scheduled) switch_tol = 0.1 * switch_tol < tol ? 0.0 : 0.1 * switch_tol;
    }

    // a vertex may not move further than its distance to the neighbours
    const GridFunction dir = riesz.solve(g);
    const double slope = g.dot(dir);
    const double spacing = std::min((v - path[top - 1]).norm(), (v - path[top + 1]).norm());
    double t = std::min(step, spacing / dir.norm());
    bool accepted = false;
    for (int k = 0; k < 80; ++k, t *= config.backtrack) {
      const GridFunction trial = v - t * dir;
      const double et = J(trial);
      if (et <= energy[top] - config.armijo_c * t * slope) {
        v = trial;
        energy[top] = et;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    step = std::min(t / config.backtrack, 1e6 * config.initial_step);
    if ((it + 1) % 10 == 0) {
      reparametrize(path);
      refresh();
    }
  }

  const std::size_t top = static_cast<std::size_t>(std::max_element(energy.begin(), energy.end()) - energy.begin());
  Solution s = finish(J, path[top], SolutionKind::mountain_pass, it, tol);
  s.auxiliary = T;
  s.converged = false;
  s.note = it >= config.max_iters ? "max_iters exceeded" : "line search stalled";
  return s;
}

std::pair<Solution, Solution> solve_nonnegative(const ProblemSpec& spec, const DiscreteDomain& domain,
                                                double lambda, const SolverConfig& config) {
  if (!spec.nonlinearity.all_positive_part())
    throw Error(ErrorKind::configuration, "nonnegative solutions need positive-part nonlinearity terms");
  Solution mp = mountain_pass(spec, domain, lambda, config, Truncation::positive_part);
  Solution min = find_local_min(spec, domain, lambda, config, Truncation::positive_part);
  return {std::move(mp), std::move(min)};
}

bool distinct_pair(const Solution& mountain, const Solution& minimum) {
  if (!mountain.converged || !minimum.converged) return false;
  const double sep = (mountain.u - minimum.u).cwiseAbs().maxCoeff();
  return sep > 1e-3 * (1.0 + mountain.linf_norm) && mountain.energy > 0.0 && minimum.energy < 0.0;
}

SweepReport lambda_sweep(const ProblemSpec& spec, const DiscreteDomain& domain,
                         const std::vector<double>& lambda_grid, const SolverConfig& config,
                         Truncation truncation) {
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (!(lambda_grid[k] > 0.0)) throw Error(ErrorKind::configuration, "lambda grid entries must be positive");
    if (k > 0 && !(lambda_grid[k] > lambda_grid[k - 1]))
      throw Error(ErrorKind::configuration, "lambda grid must be increasing");
  }
  SweepReport report;
  for (double lambda : lambda_grid) {
    SweepRow row;
    row.lambda = lambda;
    try {
      row.local_min = find_local_min(spec, domain, lambda, config, truncation);
      row.local_min_found = row.local_min->converged;
      row.local_min_energy = row.local_min->energy;
    } catch (const Error& e) {
      row.failure += std::string("local_min: ") + e.what() + "; ";
    }
    try {
      row.mountain_pass = mountain_pass(spec, domain, lambda, config, truncation);
      row.mountain_pass_found = row.mountain_pass->converged;
      row.mountain_pass_energy = row.mountain_pass->energy;
    } catch (const Error& e) {
      row.failure += std::string("mountain_pass: ") + e.what() + "; ";
    }
    if (row.local_min && row.mountain_pass) {
      row.separation = (row.mountain_pass->u - row.local_min->u).cwiseAbs().maxCoeff();
      row.distinct = distinct_pair(*row.mountain_pass, *row.local_min);
    }
    if (row.distinct) report.lambda_star = lambda;
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

/// Pieces of the eigenproblem: G(u) = Gagliardo energy, C(u) = sum h |u|^q / q.
struct EigenParts {
  const DiscreteDomain& domain;
  ProblemSpec pure;
  Eigen::VectorXd q;

  EigenParts(const ProblemSpec& spec, const DiscreteDomain& d) : domain(d), pure(spec), q(d.diagonal_exponent) {
    pure.nonlinearity.terms.clear();
  }

  double constraint(const GridFunction& u) const {
    std::vector<double> t(static_cast<std::size_t>(u.size()));
    for (Index i = 0; i < u.size(); ++i) t[static_cast<std::size_t>(i)] = domain.cell_measure * abs_power(u[i], q[i]) / q[i];
    return tree_sum(t);
  }

  GridFunction constraint_gradient(const GridFunction& u) const {
    GridFunction g(u.size());
    for (Index i = 0; i < u.size(); ++i) g[i] = domain.cell_measure * signed_power(u[i], q[i]);
    return g;
  }

  /// Radial retraction onto C = 1; empty optional when u has collapsed.
  std::optional<GridFunction> retract(const GridFunction& u) const {
    if (!u.allFinite() || u.cwiseAbs().maxCoeff() < 1e-150) return std::nullopt;
    ScaledModular m;
    for (Index i = 0; i < u.size(); ++i) m.add(q[i], domain.cell_measure * abs_power(u[i], q[i]) / q[i]);
    m.finalize();
    const double t = solve_gauge(m, 1e-15).norm;
    if (!(t > 0.0) || !std::isfinite(t)) return std::nullopt;
    return GridFunction(u / t);
  }

  double eigenvalue(const GridFunction& u) const {
    const GridFunction a = apply_operator(u, pure, domain);
    std::vector<double> num(static_cast<std::size_t>(u.size())), den(num.size());
    for (Index i = 0; i < u.size(); ++i) {
      num[static_cast<std::size_t>(i)] = a[i] * u[i];
      den[static_cast<std::size_t>(i)] = abs_power(u[i], q[i]);
    }
    return tree_sum(num) / tree_sum(den);
  }

  double residual(const GridFunction& u, double lambda) const {
    const GridFunction a = apply_operator(u, pure, domain);
    GridFunction r(u.size());
    for (Index i = 0; i < u.size(); ++i) r[i] = a[i] - lambda * signed_power(u[i], q[i]);
    return r.norm();
  }
};

}  // namespace

Solution solve_eigenproblem(const ProblemSpec& spec, const DiscreteDomain& domain, const SolverConfig& config) {
  config.validate();
  const EigenParts parts(spec, domain);
  const EnergyFunctional G(parts.pure, domain, 0.0);
  const double tol = config.grad_tol;
  const Index N = domain.size();

  InitialProfile start_profile = config.phi;
  if (start_profile.shape == "zero") start_profile = InitialProfile{};
  UniformStream rng(config.seed);

  for (int attempt = 0; attempt <= config.eigen_restarts; ++attempt) {
    GridFunction start = start_profile.sample(domain);
    if (attempt > 0)
      for (Index i = 0; i < N; ++i) start[i] += 0.1 * rng.normal();
    auto r = parts.retract(start);
    if (!r) continue;
    GridFunction u = *r;

    // projected gradient
    double e = G(u);
    double step = config.initial_step;
    double lambda = parts.eigenvalue(u);
    int it = 0;
    bool collapsed = false;
    for (; it < config.max_iters; ++it) {
      if (parts.residual(u, lambda) <= std::max(config.polish_switch, tol) * (1.0 + std::abs(lambda))) break;
      const GridFunction gg = G.gradient(u);
      const GridFunction gc = parts.constraint_gradient(u);
      const GridFunction d = gg - (gg.dot(gc) / gc.dot(gc)) * gc;
      const double dn2 = d.squaredNorm();
      double t = step;
      bool accepted = false;
      for (int k = 0; k < 80; ++k, t *= config.backtrack) {
        auto trial = parts.retract(u - t * d);
        if (!trial) {
          collapsed = true;
          break;
        }
        const double et = G(*trial);
        if (et <= e - config.armijo_c * t * dn2) {
          u = *trial;
          e = et;
          accepted = true;
          break;
        }
      }
      if (collapsed || !accepted) break;
      step = std::min(t / config.backtrack, 1e6 * config.initial_step);
      lambda = parts.eigenvalue(u);
    }
    if (collapsed) continue;

    // Newton on the KKT system in (u, mu)
    double mu = lambda;
    int newton = 0;
    auto kkt_residual = [&](const GridFunction& v, double m) {
      Eigen::VectorXd F(N + 1);
      F.head(N) = G.gradient(v) - m * parts.constraint_gradient(v);
      F[N] = parts.constraint(v) - 1.0;
      return F;
    };
    Eigen::VectorXd F = kkt_residual(u, mu);
    for (; newton < config.newton_iters; ++newton) {
      if (parts.residual(u, parts.eigenvalue(u)) <= tol * (1.0 + std::abs(parts.eigenvalue(u))) &&
          std::abs(F[N]) <= 1e-14)
        break;
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N + 1, N + 1);
      K.topLeftCorner(N, N) = G.hessian(u);
      for (Index i = 0; i < N; ++i) {
        const double slope = parts.q[i] == 2.0 ? 1.0
                                               : (parts.q[i] - 1.0) * std::pow(std::max(std::abs(u[i]), 1e-12), parts.q[i] - 2.0);
        K(i, i) -= mu * domain.cell_measure * slope;
      }
      const GridFunction gc = parts.constraint_gradient(u);
      K.block(0, N, N, 1) = -gc;
      K.block(N, 0, 1, N) = gc.transpose();
      const Eigen::VectorXd step_vec = K.partialPivLu().solve(-F);
      if (!step_vec.allFinite()) break;
      bool moved = false;
      const double fn = F.norm();
      for (double t = 1.0; t > 1e-6; t *= 0.5) {
        const GridFunction trial = u + t * step_vec.head(N);
        const double mt = mu + t * step_vec[N];
        const Eigen::VectorXd Ft = kkt_residual(trial, mt);
        if (Ft.norm() <= (1.0 - 1e-4 * t) * fn) {
          u = trial;
          mu = mt;
          F = Ft;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }

    if (u.cwiseAbs().maxCoeff() < 1e-150) continue;
    Solution s;
    s.kind = SolutionKind::eigenfunction;
    s.u = u;
    s.eigenvalue = parts.eigenvalue(u);
    s.energy = G(u);
    s.grad_norm = parts.residual(u, *s.eigenvalue);
    s.converged = s.grad_norm <= tol * (1.0 + std::abs(*s.eigenvalue));
    s.iterations = it + newton;
    s.linf_norm = u.cwiseAbs().maxCoeff();
    s.min_value = u.minCoeff();
    s.x0_norm = x0_norm(u, parts.pure, domain).norm;
    s.auxiliary = std::abs(parts.constraint(u) - 1.0);
    s.note = "critical value of the Gagliardo energy on {sum h |u|^q/q = 1}, q(x) = p(x,x)";
    if (attempt > 0) s.note += "; restarts: " + std::to_string(attempt);
    return s;
  }
  throw Error(ErrorKind::numeric, "eigen iteration collapsed to zero",
              "restarts: " + std::to_string(config.eigen_restarts));
}

WeakFormCheck weak_form_recheck(const Solution& solution, const ProblemSpec& spec, const DiscreteDomain& domain,
                                double lambda, double tol, int directions, std::uint64_t seed,
                                Truncation truncation) {
  WeakFormCheck out;
  out.directions = directions;
  UniformStream rng(seed);
  for (int k = 0; k < directions; ++k) {
    GridFunction w(domain.size());
    for (Index i = 0; i < w.size(); ++i) w[i] = rng.normal();
    const double pairing = weak_form_pairing(solution.u, w, spec, domain, lambda, truncation);
    out.worst_ratio = std::max(out.worst_ratio, std::abs(pairing) / w.norm());
  }
  out.passed = out.worst_ratio <= tol;
  return out;
}

}  // namespace vfrac

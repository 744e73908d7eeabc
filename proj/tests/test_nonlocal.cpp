#include "vfrac/nonlocal.hpp"
#include "vfrac/presets.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace vfrac;

namespace {

GridFunction mirror(const GridFunction& u) { return u.reverse(); }

ProblemSpec pure(ProblemSpec spec) {
  spec.nonlinearity.terms.clear();
  return spec;
}

}  // namespace

TEST_CASE("modular of zero") {
  const ProblemSpec spec = presets::spec_a();
  const DiscreteDomain d = build_domain(spec, 8, 1.0);
  CHECK(gagliardo_modular(GridFunction::Zero(d.size()), spec, d) == 0.0);
}

TEST_CASE("modular against the brute-force double loop") {
  const ProblemSpec spec = presets::spec_a();
  {
    const DiscreteDomain d = build_domain(spec, 4, 1.0);
    const oracle::Grid g = oracle::make_grid(1, 4);
    GridFunction u(4);
    u << 0.0, 1.0, 1.0, 0.0;
    CHECK(gagliardo_modular(u, spec, d) == doctest::Approx(oracle::modular(g, u, 0.4, 2.0)).epsilon(1e-12));
  }
  oracle::Gen gen(21);
  for (int cells : {5, 8, 13}) {
    const DiscreteDomain d = build_domain(spec, cells, 1.0);
    const oracle::Grid g = oracle::make_grid(1, cells);
    const GridFunction u = gen.vector(d.size(), -2.0, 2.0);
    CHECK(gagliardo_modular(u, spec, d) == doctest::Approx(oracle::modular(g, u, 0.4, 2.0)).epsilon(1e-12));
  }
  ProblemSpec p3 = spec;
  p3.p = ExponentField2::constant(2.3);
  p3.s = ExponentField2::constant(0.35);
  const DiscreteDomain d = build_domain(p3, 9, 1.5);
  const oracle::Grid g = oracle::make_grid(1, 9, 1.5);
  const GridFunction u = gen.vector(d.size(), -2.0, 2.0);
  CHECK(gagliardo_modular(u, p3, d) == doctest::Approx(oracle::modular(g, u, 0.35, 2.3)).epsilon(1e-12));

  const ProblemSpec two = presets::spec_a_2d();
  const DiscreteDomain d2 = build_domain(two, 4, 1.0);
  const oracle::Grid g2 = oracle::make_grid(2, 4);
  const GridFunction v = gen.vector(d2.size(), -1.0, 1.0);
  CHECK(gagliardo_modular(v, two, d2) == doctest::Approx(oracle::modular(g2, v, 0.4, 2.0)).epsilon(1e-12));
}

TEST_CASE("modular is mirror invariant") {
  ProblemSpec spec = presets::spec_a();
  auto bell = [](const Point& x, const Point& y) { return x[0] * (1 - x[0]) + y[0] * (1 - y[0]); };
  spec.s = ExponentField2::symmetrized([=](const Point& x, const Point& y) { return 0.3 + 0.1 * bell(x, y); }, 0.3, 0.35);
  spec.p = ExponentField2::symmetrized([=](const Point& x, const Point& y) { return 2.0 + bell(x, y); }, 2.0, 2.5);
  const DiscreteDomain d = build_domain(spec, 16, 1.0);
  oracle::Gen gen(22);
  for (int k = 0; k < 10; ++k) {
    const GridFunction u = gen.vector(d.size(), -2.0, 2.0);
    CHECK(gagliardo_modular(mirror(u), spec, d) == doctest::Approx(gagliardo_modular(u, spec, d)).epsilon(1e-12));
  }
}

TEST_CASE("X0 norm") {
  const ProblemSpec spec = presets::spec_a();
  const DiscreteDomain d = build_domain(spec, 16, 1.0);
  oracle::Gen gen(23);
  const GridFunction u = gen.vector(d.size(), -1.0, 1.0);
  const double rho = gagliardo_modular(u, spec, d);
  CHECK(x0_norm(u, spec, d).norm == doctest::Approx(std::sqrt(rho)).epsilon(1e-11));
  const GridFunction unit = u / std::sqrt(rho);
  CHECK(gagliardo_modular(unit, spec, d) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(x0_norm(unit, spec, d).norm - 1.0) <= 1e-11);
  CHECK(x0_norm(GridFunction::Zero(d.size()), spec, d).norm == 0.0);

  const ProblemSpec var = presets::spec_variable();
  const DiscreteDomain dv = build_domain(var, 8, 1.0);
  int above = 0, below = 0;
  for (int k = 0; k < 40; ++k) {
    const GridFunction w = gen.vector(dv.size(), -1.0, 1.0) * std::exp(gen.uniform(-3.0, 3.0));
    const double N = x0_norm(w, var, dv).norm, r = gagliardo_modular(w, var, dv);
    const double a = std::pow(N, 2.0), b = std::pow(N, 2.5);
    CHECK(r >= std::min(a, b) * (1 - 1e-10));
    CHECK(r <= std::max(a, b) * (1 + 1e-10));
    (N > 1 ? above : below) += 1;
  }
  CHECK(above > 3);
  CHECK(below > 3);
}

TEST_CASE("operator against the dense matrix") {
  const ProblemSpec spec = presets::spec_a();
  const DiscreteDomain d = build_domain(spec, 32, 1.0);
  const Eigen::MatrixXd M = oracle::linear_operator(oracle::make_grid(1, 32), 0.4);
  for (Eigen::Index k : {0, 7, 31}) {
    const GridFunction e = GridFunction::Unit(d.size(), k);
    const GridFunction row = apply_operator(e, spec, d);
    CHECK((row - M.col(k)).norm() <= 1e-12 * M.col(k).norm());
  }
  oracle::Gen gen(24);
  const GridFunction u = gen.vector(d.size(), -1.0, 1.0);
  CHECK((apply_operator(u, spec, d) - M * u).norm() <= 1e-12 * (M * u).norm());
  CHECK(apply_operator(GridFunction::Zero(d.size()), spec, d).isZero(0.0));
}

TEST_CASE("operator is odd") {
  const ProblemSpec spec = presets::spec_variable();
  const DiscreteDomain d = build_domain(spec, 16, 1.0);
  oracle::Gen gen(25);
  for (int k = 0; k < 10; ++k) {
    const GridFunction u = gen.vector(d.size(), -3.0, 3.0);
    CHECK((apply_operator(-u, spec, d) + apply_operator(u, spec, d)).isZero(0.0));
  }
}

TEST_CASE("energy against brute force") {
  const ProblemSpec spec = presets::spec_a();
  const DiscreteDomain d = build_domain(spec, 8, 1.0);
  const oracle::Grid g = oracle::make_grid(1, 8);
  oracle::Gen gen(26);
  for (int k = 0; k < 10; ++k) {
    const GridFunction u = gen.vector(d.size(), -2.0, 2.0);
    const EnergyBreakdown e = energy(u, spec, d, 0.05);
    CHECK(e.total == doctest::Approx(oracle::energy(g, u, 0.4, 2.0, 1.5, 3.5, 0.05)).epsilon(1e-12));
    CHECK(e.total == e.gagliardo_term - e.concave_term - e.convex_term);
  }
  const EnergyBreakdown z = energy(GridFunction::Zero(d.size()), spec, d, 0.05);
  CHECK(z.total == 0.0);
  CHECK(z.gagliardo_term == 0.0);
  CHECK(z.concave_term == 0.0);
  CHECK(z.convex_term == 0.0);

  const ProblemSpec p = pure(spec);
  const GridFunction u = gen.vector(d.size(), -2.0, 2.0);
  const EnergyBreakdown e = energy(u, p, d, 0.0);
  CHECK(e.total == e.gagliardo_term);
  CHECK(e.total >= 0.0);
}

TEST_CASE("gradient") {
  const ProblemSpec spec = presets::spec_a();
  const DiscreteDomain d = build_domain(spec, 16, 1.0);
  CHECK(energy_gradient(GridFunction::Zero(d.size()), spec, d, 0.05).isZero(0.0));

  const Eigen::MatrixXd M = oracle::linear_operator(oracle::make_grid(1, 16), 0.4);
  oracle::Gen gen(27);
  const GridFunction u = gen.vector(d.size(), -1.0, 1.0);
  CHECK((energy_gradient(u, pure(spec), d, 0.0) - d.h * (M * u)).norm() <= 1e-12 * (d.h * M * u).norm());

  const auto J = [&](const GridFunction& v) { return energy(v, spec, d, 0.05).total; };
  for (int k = 0; k < 20; ++k) {
    const GridFunction v = gen.vector(d.size(), -2.0, 2.0), w = gen.vector(d.size(), -1.0, 1.0);
    const double pair = energy_gradient(v, spec, d, 0.05).dot(w);
    const double fd = oracle::central_difference(J, v, w, 1e-6 * (1 + v.cwiseAbs().maxCoeff()));
    CHECK(std::abs(pair - fd) / (1 + std::abs(pair)) <= 1e-5);
    CHECK(weak_form_pairing(v, w, spec, d, 0.05) == doctest::Approx(pair).epsilon(1e-11));
  }
}

TEST_CASE("operator pairing identity") {
  const ProblemSpec spec = pure(presets::spec_variable());
  const DiscreteDomain d = build_domain(spec, 16, 1.0);
  oracle::Gen gen(28);
  for (int k = 0; k < 10; ++k) {
    const GridFunction u = gen.vector(d.size(), -2.0, 2.0), w = gen.vector(d.size(), -1.0, 1.0);
    const double lhs = d.cell_measure * apply_operator(u, spec, d).dot(w);
    CHECK(lhs == doctest::Approx(weak_form_pairing(u, w, spec, d, 0.0)).epsilon(1e-11));
  }
}

TEST_CASE("Hessian matches differences of the gradient") {
  const ProblemSpec spec = presets::spec_variable();
  const DiscreteDomain d = build_domain(spec, 8, 1.0);
  oracle::Gen gen(29);
  const GridFunction u = gen.vector(d.size(), 0.5, 2.0);
  const Eigen::MatrixXd H = energy_hessian(u, spec, d, 0.05);
  CHECK((H - H.transpose()).norm() <= 1e-14 * H.norm());
  const double e = 1e-6;
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    const GridFunction ek = GridFunction::Unit(d.size(), k);
    const GridFunction col =
        (energy_gradient(u + e * ek, spec, d, 0.05) - energy_gradient(u - e * ek, spec, d, 0.05)) / (2 * e);
    CHECK((H.col(k) - col).norm() <= 1e-6 * (1 + col.norm()));
  }
}

TEST_CASE("truncated energy") {
  const ProblemSpec spec = presets::spec_a(SignMode::positive_part);
  const DiscreteDomain d = build_domain(spec, 8, 1.0);
  const oracle::Grid g = oracle::make_grid(1, 8);
  oracle::Gen gen(30);
  const GridFunction pos = gen.vector(d.size(), 0.0, 2.0);
  const EnergyBreakdown a = energy_plus(pos, spec, d, 0.05), b = energy(pos, spec, d, 0.05);
  CHECK(a.total == b.total);
  CHECK(a.concave_term == b.concave_term);
  CHECK(a.convex_term == b.convex_term);

  const EnergyBreakdown neg = energy_plus(-pos, spec, d, 0.05);
  CHECK(neg.concave_term == 0.0);
  CHECK(neg.convex_term == 0.0);

  for (int k = 0; k < 5; ++k) {
    const GridFunction u = gen.vector(d.size(), -2.0, 2.0);
    CHECK(energy_plus(u, spec, d, 0.05).total ==
          doctest::Approx(oracle::energy(g, u, 0.4, 2.0, 1.5, 3.5, 0.05, true)).epsilon(1e-12));
    const auto J = [&](const GridFunction& v) { return energy_plus(v, spec, d, 0.05).total; };
    const GridFunction w = gen.vector(d.size(), -1.0, 1.0);
    const double pair = energy_plus_gradient(u, spec, d, 0.05).dot(w);
    CHECK(std::abs(pair - oracle::central_difference(J, u, w, 1e-6)) / (1 + std::abs(pair)) <= 1e-5);
  }

  CHECK_THROWS_AS(energy_plus(pos, presets::spec_a(), d, 0.05), Error);
}

TEST_CASE("input errors") {
  const ProblemSpec spec = presets::spec_a();
  const DiscreteDomain d = build_domain(spec, 8, 1.0);
  try {
    gagliardo_modular(GridFunction::Zero(3), spec, d);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }
  GridFunction u = GridFunction::Zero(d.size());
  u[2] = std::nan("");
  try {
    energy(u, spec, d, 0.05);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::numeric);
  }
  u[2] = 1e300;
  CHECK_THROWS_AS(energy(u, spec, d, 0.05), Error);
}

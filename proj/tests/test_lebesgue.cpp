#include "vfrac/lebesgue.hpp"
#include "vfrac/presets.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace vfrac;

namespace {

const DiscreteDomain& grid16() {
  static const DiscreteDomain d = build_domain(presets::spec_a(), 16, 1.0);
  return d;
}

ExponentField1 variable_beta() {
  return ExponentField1::from([](const Point& x) { return 2.0 + x[0]; }, 2.0, 3.0);
}

}  // namespace

TEST_CASE("modular on constants") {
  const DiscreteDomain& d = grid16();
  const GridFunction one = GridFunction::Ones(d.size());
  CHECK(lebesgue_modular(one, ExponentField1::constant(2.0), d) == doctest::Approx(1.0).epsilon(1e-15));
  const ExponentField1 split = ExponentField1::from([](const Point& x) { return x[0] < 0.5 ? 2.0 : 3.0; }, 2.0, 3.0);
  CHECK(lebesgue_modular(2.0 * one, split, d) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(lebesgue_modular(GridFunction::Zero(d.size()), split, d) == 0.0);
}

TEST_CASE("norm of constants") {
  const DiscreteDomain& d = grid16();
  const GridFunction one = GridFunction::Ones(d.size());
  for (double c : {0.3, 1.0, 7.5})
    for (double b : {1.2, 2.0, 4.5})
      CHECK(luxemburg_norm(c * one, ExponentField1::constant(b), d).norm == doctest::Approx(c).epsilon(1e-12));
  const LuxemburgResult z = luxemburg_norm(GridFunction::Zero(d.size()), variable_beta(), d);
  CHECK(z.norm == 0.0);
  CHECK(z.residual == 0.0);
}

TEST_CASE("variable exponent norm against a midpoint bisection") {
  const DiscreteDomain& d = grid16();
  const GridFunction u = GridFunction::Constant(d.size(), 2.0);
  const double h = d.h;
  const double expected = oracle::bisect_decreasing(
      [&](double lam) {
        double s = 0.0;
        for (int i = 0; i < 16; ++i) s += h * std::pow(2.0 / lam, 2.0 + (i + 0.5) * h);
        return s - 1.0;
      },
      1.0, 4.0);
  CHECK(luxemburg_norm(u, variable_beta(), d).norm == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("variable exponent norm converges to the integral") {
  const double exact = oracle::bisect_decreasing(
      [](double lam) {
        return oracle::simpson([lam](double x) { return std::pow(2.0 / lam, 2.0 + x); }, 0.0, 1.0, 1e-14) - 1.0;
      },
      1.0, 4.0);
  ProblemSpec spec = presets::spec_a();
  for (int cells : {64, 256}) {
    const DiscreteDomain d = build_domain(spec, cells, 1.0);
    const double got = luxemburg_norm(GridFunction::Constant(d.size(), 2.0), variable_beta(), d).norm;
    const double h = 1.0 / cells;
    CHECK(std::abs(got - exact) <= 0.1 * h * h);
  }
}

TEST_CASE("Hoelder bound") {
  const DiscreteDomain& d = grid16();
  const ExponentField1 two = ExponentField1::constant(2.0);
  const GridFunction one = GridFunction::Ones(d.size());
  BoundCheck b = holder_bound_check(one, one, two, d);
  CHECK(b.holds);
  CHECK(b.lhs == doctest::Approx(1.0));
  CHECK(b.rhs == doctest::Approx(2.0));

  b = holder_bound_check(GridFunction::Zero(d.size()), one, two, d);
  CHECK(b.holds);
  CHECK(b.lhs == 0.0);
  CHECK(b.rhs == 0.0);

  oracle::Gen gen(11);
  for (int k = 0; k < 50; ++k) {
    const GridFunction u = gen.vector(d.size(), -3.0, 3.0), v = gen.vector(d.size(), -3.0, 3.0);
    const BoundCheck c = holder_bound_check(u, v, two, d);
    const double lhs = d.h * u.cwiseProduct(v).cwiseAbs().sum();
    const double rhs = 2.0 * std::sqrt(d.h * u.squaredNorm()) * std::sqrt(d.h * v.squaredNorm());
    CHECK(c.holds);
    CHECK(c.lhs == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(c.rhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("power norm bound") {
  const DiscreteDomain& d = grid16();
  oracle::Gen gen(12);
  const GridFunction u = gen.vector(d.size(), -2.0, 2.0);

  const ExponentField1 nu = ExponentField1::constant(3.0);
  BoundCheck b = power_norm_bound(u, ExponentField1::constant(1.0), nu, d);
  CHECK(b.holds);
  CHECK(b.rhs == doctest::Approx(2.0 * b.lhs).epsilon(1e-12));

  b = power_norm_bound(GridFunction::Ones(d.size()), variable_beta(), ExponentField1::constant(1.5), d);
  CHECK(b.holds);
  CHECK(b.lhs == doctest::Approx(1.0));
  CHECK(b.rhs == doctest::Approx(2.0));

  for (int k = 0; k < 50; ++k) {
    const GridFunction w = gen.vector(d.size(), -4.0, 4.0);
    const BoundCheck c = power_norm_bound(w, ExponentField1::constant(1.5), ExponentField1::constant(2.0), d);
    double cubes = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) cubes += d.h * std::pow(std::abs(w[i]), 3.0);
    CHECK(c.holds);
    CHECK(c.lhs == doctest::Approx(std::sqrt(cubes)).epsilon(1e-10));
    CHECK(c.rhs == doctest::Approx(2.0 * std::sqrt(cubes)).epsilon(1e-10));
  }

  CHECK_THROWS_AS(power_norm_bound(u, ExponentField1::constant(0.5), ExponentField1::constant(1.5), d), Error);
}

TEST_CASE("homogeneity for constant exponent") {
  const DiscreteDomain& d = grid16();
  oracle::Gen gen(13);
  for (int k = 0; k < 40; ++k) {
    const GridFunction u = gen.vector(d.size(), -5.0, 5.0);
    const double b = gen.uniform(1.1, 5.0), c = gen.uniform(-10.0, 10.0);
    const ExponentField1 beta = ExponentField1::constant(b);
    CHECK(luxemburg_norm(c * u, beta, d).norm == doctest::Approx(std::abs(c) * luxemburg_norm(u, beta, d).norm).epsilon(1e-10));
  }
}

TEST_CASE("modular at the norm is one and the sandwich holds") {
  const DiscreteDomain& d = grid16();
  oracle::Gen gen(14);
  const ExponentField1 beta = variable_beta();
  int above = 0, below = 0;
  for (int k = 0; k < 60; ++k) {
    const GridFunction u = gen.vector(d.size(), -1.0, 1.0) * std::exp(gen.uniform(-3.0, 3.0));
    const double N = luxemburg_norm(u, beta, d).norm;
    const double rho = lebesgue_modular(u, beta, d);
    CHECK(lebesgue_modular(u / N, beta, d) == doctest::Approx(1.0).epsilon(1e-10));
    const double lo = std::min(std::pow(N, 2.0), std::pow(N, 3.0)), hi = std::max(std::pow(N, 2.0), std::pow(N, 3.0));
    CHECK(rho >= lo * (1 - 1e-10));
    CHECK(rho <= hi * (1 + 1e-10));
    (N > 1.0 ? above : below) += 1;
  }
  CHECK(above > 5);
  CHECK(below > 5);
}

TEST_CASE("triangle inequality") {
  const DiscreteDomain& d = grid16();
  oracle::Gen gen(15);
  const ExponentField1 beta = variable_beta();
  for (int k = 0; k < 60; ++k) {
    const GridFunction u = gen.vector(d.size(), -3.0, 3.0), v = gen.vector(d.size(), -3.0, 3.0);
    const double lhs = luxemburg_norm(u + v, beta, d).norm;
    const double rhs = luxemburg_norm(u, beta, d).norm + luxemburg_norm(v, beta, d).norm;
    CHECK(lhs <= rhs + 10.0 * 1e-12 * rhs);
  }
}

TEST_CASE("gauge errors") {
  ScaledModular m;
  m.add(2.0, std::numeric_limits<double>::infinity());
  m.finalize();
  CHECK_THROWS_AS(solve_gauge(m, 1e-12), Error);
}

#include "vfrac/expression.hpp"
#include "vfrac/presets.hpp"
#include "vfrac/problem.hpp"

#include <doctest.h>

#include <cmath>

using namespace vfrac;

namespace {

ProblemSpec constant_spec(int n, double s, double p) {
  ProblemSpec spec = n == 1 ? presets::spec_a() : presets::spec_a_2d();
  spec.s = ExponentField2::constant(s);
  spec.p = ExponentField2::constant(p);
  return spec;
}

}  // namespace

TEST_CASE("critical exponent arithmetic") {
  CHECK(critical_exponent(constant_spec(2, 0.5, 2.0), Point(0.3, 0.7)) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(critical_exponent(constant_spec(1, 0.4, 2.0), Point(0.5, 0.0)) == doctest::Approx(10.0).epsilon(1e-14));

  ProblemSpec v = presets::spec_a();
  v.s = ExponentField2::raw([](const Point& x, const Point&) { return 0.25 + 0.1 * x[0]; }, 0.25, 0.35);
  v.p = ExponentField2::raw([](const Point& x, const Point&) { return 2.0 + 0.25 * 2.0 * x[0]; }, 2.0, 2.5);
  CHECK(critical_exponent(v, Point(0.0, 0.0)) == doctest::Approx(4.0).epsilon(1e-15));

  CHECK_THROWS_AS(critical_exponent(constant_spec(1, 0.5, 2.0), Point(0.5, 0.0)), Error);
}

TEST_CASE("critical exponent exceeds p(x,x)") {
  const ProblemSpec spec = presets::spec_variable();
  for (double x = 0.0; x <= 1.0; x += 0.125) {
    const Point pt(x, 0.0);
    CHECK(critical_exponent(spec, pt) > spec.q(pt));
  }
}

TEST_CASE("reference problem passes every hypothesis") {
  const HypothesisReport r = validate_hypotheses(presets::spec_a(), 256);
  for (const auto& c : r.checks) {
    INFO(c.name);
    CHECK(c.passed);
  }
  CHECK(r.admissible);
  CHECK(r.multiplicity_eligible);
  CHECK(r.regularity_eligible);
  CHECK(r.min_critical_exponent == doctest::Approx(10.0));
  CHECK(r.at("sp<n").worst_margin == doctest::Approx(0.2));
  CHECK(r.at("A1").worst_margin == doctest::Approx(0.5));
  CHECK(r.at("p+<r-").worst_margin == doctest::Approx(1.5));
}

TEST_CASE("asymmetric order fails the symmetry check at (1,0)") {
  ProblemSpec spec = presets::spec_a();
  spec.s = ExponentField2::raw([](const Point& x, const Point& y) { return 0.4 + 0.1 * (x[0] - y[0]); }, 0.3, 0.5);
  const HypothesisReport r = validate_hypotheses(spec, 128);
  const HypothesisCheck& s1 = r.at("S1");
  CHECK_FALSE(s1.passed);
  REQUIRE(s1.witness);
  CHECK(s1.witness->first[0] == 1.0);
  CHECK(s1.witness->second[0] == 0.0);
  CHECK_FALSE(r.admissible);
}

TEST_CASE("sp = n is rejected") {
  const HypothesisReport r = validate_hypotheses(constant_spec(1, 0.5, 2.0), 64);
  CHECK_FALSE(r.at("sp<n").passed);
  CHECK(r.at("sp<n").worst_margin == 0.0);
  CHECK_FALSE(r.admissible);
  CHECK_FALSE(r.multiplicity_eligible);
}

TEST_CASE("validation errors") {
  ProblemSpec spec = presets::spec_a();
  CHECK_THROWS_AS(validate_hypotheses(spec, 0), Error);

  spec.s = ExponentField2::raw([](const Point&, const Point&) { return 0.9; }, 0.1, 0.5);
  try {
    validate_hypotheses(spec, 16);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::configuration);
  }

  spec = presets::spec_a();
  spec.alpha = ExponentField1::from([](const Point&) { return std::nan(""); }, 1.0, 2.0);
  try {
    validate_hypotheses(spec, 16);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::evaluator);
    CHECK_FALSE(e.witness().empty());
  }
}

TEST_CASE("nonlinearity closed forms") {
  const ProblemSpec spec = presets::spec_a();
  const Point x(0.5, 0.0);
  const NonlinearityValue v = evaluate_nonlinearity(spec, x, 2.0);
  CHECK(v.f == doctest::Approx(std::pow(2.0, 2.5)).epsilon(1e-15));
  CHECK(v.F == doctest::Approx(std::pow(2.0, 3.5) / 3.5).epsilon(1e-15));
  const NonlinearityValue odd = evaluate_nonlinearity(spec, x, -2.0);
  CHECK(odd.f == -v.f);
  CHECK(odd.F == v.F);

  const NonlinearityValue zero = evaluate_nonlinearity(spec, x, 0.0);
  CHECK(zero.f == 0.0);
  CHECK(zero.F == 0.0);

  const ProblemSpec pos = presets::spec_a(SignMode::positive_part);
  const NonlinearityValue neg = evaluate_nonlinearity(pos, x, -1.0);
  CHECK(neg.f == 0.0);
  CHECK(neg.F == 0.0);
  CHECK(evaluate_nonlinearity(pos, x, 2.0).f == doctest::Approx(v.f).epsilon(1e-15));
}

TEST_CASE("F is an antiderivative of f") {
  const ProblemSpec spec = presets::spec_a();
  const Point x(0.25, 0.0);
  for (double t : {-3.0, -0.7, 0.2, 1.0, 2.5}) {
    const double e = 1e-5;
    const double fd = (evaluate_nonlinearity(spec, x, t + e).F - evaluate_nonlinearity(spec, x, t - e).F) / (2 * e);
    CHECK(fd == doctest::Approx(evaluate_nonlinearity(spec, x, t).f).epsilon(1e-8));
    const double dfd = (evaluate_nonlinearity(spec, x, t + e).f - evaluate_nonlinearity(spec, x, t - e).f) / (2 * e);
    CHECK(dfd == doctest::Approx(nonlinearity_derivative(spec, x, t)).epsilon(1e-7));
  }
}

TEST_CASE("symmetrized fields are symmetric bit for bit") {
  const ProblemSpec spec = presets::spec_variable();
  const Point a(0.13, 0.0), b(0.71, 0.0);
  CHECK(spec.s(a, b) == spec.s(b, a));
  CHECK(spec.p(a, b) == spec.p(b, a));
  CHECK(spec.p(a, b) == doctest::Approx(2.0 + 0.25 * 0.84));
}

TEST_CASE("expression parser") {
  const Expression e = Expression::parse("0.4 + 0.05*(x1 + y1)", 1);
  CHECK(e(Point(1.0, 0.0), Point(0.5, 0.0)) == doctest::Approx(0.475));
  CHECK(e.uses_y());
  CHECK(Expression::parse("2^3^2", 1)(Point::Zero()) == 512.0);
  CHECK(Expression::parse("-2^2", 1)(Point::Zero()) == -4.0);
  CHECK(Expression::parse("sqrt(abs(-16)) + exp(0) + log(1)", 1)(Point::Zero()) == 5.0);
  CHECK(Expression::parse("x2", 2)(Point(0.0, 3.0)) == 3.0);

  try {
    Expression::parse("0.4 + z", 1);
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::parse);
    CHECK(std::string(err.what()).find("column 7") != std::string::npos);
  }
  CHECK_THROWS_AS(Expression::parse("x2", 1), Error);
  CHECK_THROWS_AS(Expression::parse("(1 + 2", 1), Error);
  CHECK_THROWS_AS(Expression::parse("1 +", 1), Error);
}

#include "doctest.h"

#include <cmath>

#include "confmass/conformal.hpp"
#include "confmass/potential.hpp"
#include "test_support.hpp"

using namespace confmass;
using testing::code_of;

TEST_CASE("potential field reproduces its samples") {
  const auto f = [](double r, double t) { return 2.0 + r * r * std::cos(2 * t) + 0.3 * r * std::sin(t); };
  const PotentialField p = PotentialField::from_function(32, 64, FieldSign::Positive, f);
  for (int i = 0; i <= p.n_r(); i += 5)
    for (int j = 0; j < p.n_theta(); j += 7) CHECK(p.value(p.radius(i), p.angle(j)) == doctest::Approx(p.sample(i, j)).epsilon(1e-13));
  CHECK(p.value(0.47, 1.1) == doctest::Approx(f(0.47, 1.1)).epsilon(1e-6));
  CHECK(p.value(0.01, 4.0) == doctest::Approx(f(0.01, 4.0)).epsilon(1e-6));
  const PolarGradient g = p.gradient(0.6, 0.4);
  CHECK(g.d_r == doctest::Approx(2 * 0.6 * std::cos(0.8) + 0.3 * std::sin(0.4)).epsilon(1e-4));
  CHECK(g.d_theta == doctest::Approx(-2 * 0.36 * std::sin(0.8) + 0.18 * std::cos(0.4)).epsilon(2e-3));
}

TEST_CASE("integral against the singular weight") {
  const PotentialField c = PotentialField::constant(3.0);
  for (double a : {-0.5, 0.0, 1.0}) CHECK(c.integral(a) == doctest::Approx(3.0 * kPi / (1 + a)).epsilon(1e-12));
  // int_D r^2 |y|^{2a} dy = 2 pi / (2a + 4)
  const PotentialField q = PotentialField::from_function(64, 64, FieldSign::NonNegative, [](double r, double) { return r * r; });
  CHECK(q.integral(0.5) == doctest::Approx(kTwoPi / 5.0).epsilon(1e-4));
}

TEST_CASE("extrema scan of an affine field") {
  const PotentialField p = PotentialField::from_function(
      64, 128, FieldSign::Positive, [](double r, double t) { return 1.0 + 0.5 * r * std::cos(t); });
  CHECK(p.extrema().inf_value == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(std::abs(p.extrema().inf_location - Point(-1, 0)) < 1e-10);
  CHECK(p.extrema().sup_gradient == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(p.min_sample() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("transport through the identity map") {
  const ConformalMap m = compute_map(build_domain(UnitDisk{}), 128);
  for (double a : {-0.5, 0.0, 2.0}) {
    const PotentialField p = transform_potential(m, a, [](Point) { return 1.0; }, {16, 32});
    for (double s : p.samples()) CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("transport through a scaling scales by R^(2 + 2 alpha)") {
  const double big_r = 2.0;
  const ConformalMap m = compute_map(build_domain(FourierBlob{{big_r}, {}}), 128);
  for (double a : {-0.5, 0.0, 1.0}) {
    const PotentialField p = transform_potential(m, a, [](Point) { return 1.0; }, {16, 32});
    const double expected = std::pow(big_r, 2 + 2 * a);
    for (double s : p.samples()) CHECK(s == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("analytic fields") {
  CHECK(evaluate(ConstantField{2.5}, Point(3, 4)) == 2.5);
  CHECK(evaluate(AffineField{1.0, 0.25, 0.1}, Point(2, -1)) == doctest::Approx(1.4));
  const GaussianBumpField bump{Point(0.5, 0), 0.25, 1.0};
  CHECK(evaluate(bump, Point(0.5, 0)) == doctest::Approx(2.0));
  CHECK(evaluate(bump, Point(0.75, 0)) == doctest::Approx(1.0 + std::exp(-0.5)));
}

TEST_CASE("potential errors") {
  const ConformalMap m = compute_map(build_domain(UnitDisk{}), 128);
  CHECK(code_of([&] { transform_potential(m, 0.0, [](Point x) { return x.real(); }, {16, 32}); }) ==
        ErrorCode::NonPositivePotential);
  CHECK(code_of([&] { transform_potential(m, -1.0, [](Point) { return 1.0; }, {16, 32}); }) ==
        ErrorCode::SingularityMismatch);
  CHECK(code_of([&] { PotentialField(8, 16, std::vector<double>(10, 1.0), FieldSign::Positive); }) ==
        ErrorCode::InvalidParameter);
  CHECK(code_of([&] { PotentialField::constant(0.0); }) == ErrorCode::NonPositivePotential);
  // A nonnegative weight may vanish.
  CHECK_NOTHROW(PotentialField::from_function(8, 16, FieldSign::NonNegative, [](double r, double) { return r; }));
}

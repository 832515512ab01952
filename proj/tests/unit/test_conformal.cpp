#include "doctest.h"

#include <cmath>

#include "confmass/conformal.hpp"
#include "confmass/potential.hpp"
#include "test_support.hpp"

using namespace confmass;
using testing::code_of;

TEST_CASE("identity map on the unit disk") {
  const ConformalMap m = compute_map(build_domain(UnitDisk{}), 128);
  CHECK(m.phi_prime_at_origin() == doctest::Approx(1.0).epsilon(1e-12));
  for (int k = 0; k < m.size(); k += 17) CHECK(m.theta()[k] == doctest::Approx(m.t()[k]).epsilon(1e-12));
  for (Point z : {Point(0.3, 0.2), Point(-0.5, 0.7), Point(0.0, -0.95)}) {
    CHECK(std::abs(m.forward(z) - z) < 1e-12);
    CHECK(std::abs(m.inverse(z) - z) < 1e-12);
    CHECK(conformal_factor(m, z) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("scaled disk maps by z / R") {
  const ConformalMap m = compute_map(build_domain(FourierBlob{{2.0}, {}}), 128);
  CHECK(m.phi_prime_at_origin() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(m.forward(Point(1.0, 0.0)) - Point(0.5, 0.0)) < 1e-12);
  CHECK(std::abs(m.derivative(Point(0.4, -1.1)) - Point(0.5, 0.0)) < 1e-11);
  CHECK(conformal_factor(m, Point(0.2, 0.6)) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("ellipse map is consistent") {
  const ConformalMap m = compute_map(build_domain(Ellipse{1.5, 1.0}), 512);
  CHECK(m.boundary_modulus_residual() < 1e-10);
  CHECK(m.equation_residual() < 1e-10);
  for (int k = 1; k < m.size(); ++k) CHECK(m.theta()[k] > m.theta()[k - 1]);

  // Conformal radius of a convex domain lies between inradius and outradius.
  const double radius = 1.0 / m.phi_prime_at_origin();
  CHECK(radius > 1.0);
  CHECK(radius < 1.5);

  for (Point z : {Point(0.1, 0.2), Point(1.2, 0.3), Point(-0.9, -0.5), Point(0.0, 0.97)}) {
    REQUIRE(m.contains(z));
    const Point y = m.forward(z);
    CHECK(std::abs(y) < 1.0);
    CHECK(std::abs(m.inverse(y) - z) < 1e-8);
  }

  // Cauchy-Riemann: the complex derivative agrees with both directional differences.
  const Point z0(0.4, -0.3);
  const double h = 1e-5;
  const Point dx = (m.forward(z0 + h) - m.forward(z0 - h)) / (2 * h);
  const Point dy = (m.forward(z0 + Point(0, h)) - m.forward(z0 - Point(0, h))) / Point(0, 2 * h);
  CHECK(std::abs(dx - dy) < 1e-8);
  CHECK(std::abs(dx - m.derivative(z0)) < 1e-8);

  // Inverse Jacobian at the origin against a finite difference of the inverse.
  const Point di = (m.inverse(Point(h, 0)) - m.inverse(Point(-h, 0))) / (2 * h);
  CHECK(conformal_factor(m, Point(0, 0)) == doctest::Approx(std::norm(di)).epsilon(1e-6));
}

TEST_CASE("conformal factor integrates to the domain area") {
  const ConformalMap m = compute_map(build_domain(Ellipse{1.5, 1.0}), 512);
  const PotentialField f = transform_potential(m, 0.0, [](Point) { return 1.0; });
  CHECK(f.integral(0.0) == doctest::Approx(1.5 * kPi).epsilon(2e-5));
}

TEST_CASE("boundary correspondence matches the stored trace") {
  const ConformalMap m = compute_map(build_domain(FourierBlob{{1.0, 0.0, 0.15}, {0.0, 0.0, 0.0, 0.1}}), 512);
  for (int k : {0, 50, 300}) {
    const BoundaryCorrespondence b = m.at_boundary_angle(m.theta()[k]);
    CHECK(b.t == doctest::Approx(m.t()[k]).epsilon(1e-9));
    CHECK(std::abs(b.x - m.gamma()[k]) < 1e-9);
    CHECK(b.inverse_derivative > 0.0);
  }
}

TEST_CASE("map errors") {
  const ConformalMap m = compute_map(build_domain(Ellipse{1.5, 1.0}), 256);
  CHECK(code_of([&] { m.forward(Point(1.6, 0.0)); }) == ErrorCode::PointOutsideDomain);
  CHECK(code_of([&] { m.inverse(Point(1.0, 0.1)); }) == ErrorCode::PointOutsideDomain);
  CHECK(code_of([&] { compute_map(build_domain(UnitDisk{}), 63); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([&] { compute_map(build_domain(UnitDisk{}), 32); }) == ErrorCode::InvalidParameter);
  const double radii[] = {0.5, 0.2};
  CHECK(code_of([&] { m.inverse_ray(0.0, radii); }) == ErrorCode::InvalidParameter);
}

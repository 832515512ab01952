#include "doctest.h"

#include <cmath>

#include "confmass/error.hpp"
#include "confmass/geometry.hpp"
#include "test_support.hpp"

using namespace confmass;

using testing::code_of;

TEST_CASE("unit disk boundary is the unit circle") {
  const DomainSpec d = build_domain(UnitDisk{});
  for (double t : {0.0, 0.3, 1.7, 4.0}) {
    CHECK(std::abs(d.point(t) - std::polar(1.0, t)) < 1e-15);
  }
  const BoundaryFrame f0 = boundary_point(d, 0.0);
  CHECK(std::abs(f0.point - Point(1, 0)) < 1e-15);
  CHECK(std::abs(f0.normal - Point(1, 0)) < 1e-15);
  const BoundaryFrame f1 = boundary_point(d, kPi / 2);
  CHECK(std::abs(f1.point - Point(0, 1)) < 1e-15);
  CHECK(std::abs(f1.normal - Point(0, 1)) < 1e-15);
}

TEST_CASE("ellipse parametrization and outward normal") {
  const DomainSpec d = build_domain(Ellipse{1.5, 1.0});
  for (double t : {0.0, 1.0, 2.5}) CHECK(std::abs(d.point(t) - Point(1.5 * std::cos(t), std::sin(t))) < 1e-14);
  CHECK(winding_number(d, 2048) == doctest::Approx(1.0).epsilon(1e-12));
  const BoundaryFrame f = boundary_point(d, 0.0);
  CHECK(std::abs(f.point - Point(1.5, 0)) < 1e-15);
  CHECK(std::abs(f.normal - Point(1, 0)) < 1e-14);
  // t is reduced modulo 2 pi.
  CHECK(std::abs(boundary_point(d, kTwoPi + 0.4).point - d.point(0.4)) < 1e-13);
}

TEST_CASE("invalid domain parameters") {
  CHECK(code_of([] { build_domain(Ellipse{1.5, -1.0}); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { build_domain(Ellipse{0.0, 1.0}); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { build_domain(Dumbbell{0.0}); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { build_domain(Dumbbell{1.0}); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { build_domain(FourierBlob{}); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("limacon with an inner loop is rejected as self-intersecting") {
  CHECK(code_of([] { build_domain(FourierBlob{{0.5, 1.0}, {}}); }) == ErrorCode::SelfIntersectingBoundary);
}

TEST_CASE("frames are orthonormal on every built family") {
  const std::vector<DomainShape> shapes{UnitDisk{}, Ellipse{1.5, 1.0}, FourierBlob{{1.0, 0.0, 0.15}, {0, 0, 0, 0.1}},
                                        Dumbbell{0.25}};
  for (const auto& s : shapes) {
    const DomainSpec d = build_domain(s);
    CHECK(winding_number(d, 4096) == doctest::Approx(1.0).epsilon(1e-10));
    for (int k = 0; k < 200; ++k) {
      const BoundaryFrame f = boundary_point(d, kTwoPi * k / 200);
      CHECK(std::abs(std::abs(f.normal) - 1.0) < 1e-12);
      CHECK(std::abs(std::abs(f.tangent) - 1.0) < 1e-12);
      CHECK(std::abs((std::conj(f.normal) * f.tangent).real()) < 1e-12);
    }
  }
}

TEST_CASE("dumbbell radius coefficients and neck monotonicity") {
  const TrigSeries r = dumbbell_radius(0.25);
  // eps + (1 - eps) cos^2 t = (1 + eps)/2 + (1 - eps)/2 cos 2t.
  CHECK(r.value(0.0) == doctest::Approx(1.0));
  CHECK(r.value(kPi / 2) == doctest::Approx(0.25));
  CHECK(r.value(0.7) == doctest::Approx(0.25 + 0.75 * std::cos(0.7) * std::cos(0.7)));
  double previous = 1e9;
  for (double eps : {0.5, 0.25, 0.125, 0.0625}) {
    const double w = half_width_at(build_domain(Dumbbell{eps}), 0.0);
    CHECK(w == doctest::Approx(eps).epsilon(1e-9));
    CHECK(w < previous);
    previous = w;
  }
}

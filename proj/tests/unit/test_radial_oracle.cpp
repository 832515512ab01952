#include "doctest.h"

#include <cmath>

#include "confmass/geometry.hpp"
#include "confmass/radial_oracle.hpp"
#include "test_support.hpp"

using namespace confmass;
using testing::code_of;

namespace {

// Composite Simpson on [0, 1] in t = r^{1/4}, which removes the r^{2a}
// singularity for the exponents used here.
template <class F>
double disk_integral(F f, double alpha) {
  const int n = 4000;
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / n;
    const double r = std::pow(t, 4.0);
    const double jac = 4.0 * std::pow(t, 3.0);
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const double integrand = r > 0.0 ? std::pow(r, 2 * alpha + 1) * f(r) * jac : 0.0;
    total += w * integrand;
  }
  return kTwoPi * total / (3.0 * n);
}

}  // namespace

TEST_CASE("closed-form constants") {
  const RadialOracle o = radial_oracle(0.0, 1.0);
  CHECK(o.lambda == doctest::Approx(2.0));
  CHECK(o.mass == doctest::Approx(4 * kPi));
  CHECK(o.sup_norm == doctest::Approx(2 * std::log(2.0)));
  CHECK(o.value(0.0) == doctest::Approx(o.sup_norm));
  CHECK(std::abs(o.value(1.0)) < 1e-15);
}

TEST_CASE("oracle solves the radial equation") {
  for (double a : {-0.5, 0.0, 0.5, 1.0}) {
    for (double b : {0.2, 1.0, 7.0}) {
      const RadialOracle o = radial_oracle(a, b);
      const double h = 1e-4;
      for (double r : {0.2, 0.5, 0.9}) {
        const double v0 = o.value(r), vp = o.value(r + h), vm = o.value(r - h);
        const double lap = (vp - 2 * v0 + vm) / (h * h) + (vp - vm) / (2 * h * r);
        CHECK(-lap == doctest::Approx(o.lambda * std::pow(r, 2 * a) * std::exp(v0)).epsilon(1e-5));
        CHECK(o.derivative(r) == doctest::Approx((vp - vm) / (2 * h)).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("mass equals the integral and the boundary flux") {
  for (double a : {-0.5, 0.0, 1.0}) {
    const RadialOracle o = radial_oracle(a, 3.0);
    const double integral = disk_integral([&](double r) { return o.lambda * std::exp(o.value(r)); }, a);
    CHECK(integral == doctest::Approx(o.mass).epsilon(1e-8));
    CHECK(-kTwoPi * o.derivative(1.0) == doctest::Approx(o.mass).epsilon(1e-12));
  }
}

TEST_CASE("lambda peaks at b = 1 and is symmetric under b -> 1/b") {
  for (double a : {-0.5, 0.0, 0.5, 1.0}) {
    const double peak = 2 * (1 + a) * (1 + a);
    CHECK(radial_oracle(a, 1.0).lambda == doctest::Approx(peak));
    for (double b : {0.1, 0.5, 0.9, 1.1, 4.0, 100.0}) {
      CHECK(radial_oracle(a, b).lambda < peak);
      CHECK(radial_oracle(a, b).lambda == doctest::Approx(radial_oracle(a, 1.0 / b).lambda));
      CHECK(radial_oracle(a, b).mass < 8 * kPi * (1 + a));
    }
  }
}

TEST_CASE("center value parametrization") {
  for (double s : {0.1, 1.0, 2 * std::log(101.0)}) {
    const double b = oracle_b_for_center(s);
    CHECK(radial_oracle(0.0, b).value(0.0) == doctest::Approx(s).epsilon(1e-14));
  }
  CHECK(oracle_b_for_center(2 * std::log(101.0)) == doctest::Approx(100.0));
}

TEST_CASE("grid sampling") {
  const PolarGrid g = build_grid(16, 16, 0.5);
  const RadialOracle o = radial_oracle(0.5, 2.0);
  const auto v = o.sample(g);
  REQUIRE(v.size() == static_cast<std::size_t>(g.size()));
  CHECK(v[static_cast<std::size_t>(g.index(3, 5))] == doctest::Approx(o.value(g.radii[3])));
}

TEST_CASE("oracle errors") {
  CHECK(code_of([] { radial_oracle(-1.0, 1.0); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { radial_oracle(0.0, 0.0); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { radial_oracle(0.0, std::nan("")); }) == ErrorCode::InvalidParameter);
}

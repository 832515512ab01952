#include "doctest.h"

#include <cmath>

#include "confmass/pohozaev.hpp"
#include "confmass/radial_oracle.hpp"
#include "test_support.hpp"

using namespace confmass;
using testing::code_of;

namespace {

double liouville_residual(int n_r, int n_theta) {
  const DiskSolution s = solve_newton(LiouvilleProblem{1.0, 0.0}, build_grid(n_r, n_theta, 0.0));
  return pohozaev_report(s).relative_residual;
}

PotentialField tilted_field() {
  return PotentialField::from_function(32, 64, FieldSign::Positive, [](double r, double t) {
    return 1.0 + 0.25 * r * std::cos(t) + 0.1 * r * std::sin(t);
  });
}

}  // namespace

TEST_CASE("identity on a radial Liouville solution") {
  const PolarGrid g = build_grid(128, 32, 0.0);
  const DiskSolution s = solve_newton(LiouvilleProblem{1.0, 0.0}, g);
  const PohozaevReport r = pohozaev_report(s);
  const RadialOracle o = radial_oracle(0.0, 3.0 - 2.0 * std::sqrt(2.0));
  CHECK(r.relative_residual < 1e-3);
  CHECK(r.mass == doctest::Approx(o.mass).epsilon(1e-4));
  CHECK(r.rhs_integral == doctest::Approx(-r.flux).epsilon(1e-8));
  CHECK(r.mass == doctest::Approx(r.rhs_integral).epsilon(1e-14));
  CHECK(std::abs(r.holder_gap) <= 1e-8 * r.lhs);
  // Radial K: the gradient term vanishes and the circle term is lambda * 2 pi.
  CHECK(std::abs(r.rhs_radial) < 1e-12);
  CHECK(r.rhs_boundary == doctest::Approx(kTwoPi).epsilon(1e-12));
}

TEST_CASE("identity residual is second order") {
  const double coarse = liouville_residual(64, 32), fine = liouville_residual(128, 32);
  const double ratio = coarse / fine;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("identity with singular weight and variable K") {
  const PolarGrid g = build_grid(128, 64, 0.5);
  const DiskSolution s = solve_newton(LiouvilleProblem{1.0, 0.5, tilted_field()}, g);
  const PohozaevReport r = pohozaev_report(s);
  CHECK(r.relative_residual < 1e-3);
  CHECK(r.rhs_radial > 0.0);
  // Cauchy-Schwarz on the circle; strict when the normal derivative varies.
  CHECK(r.holder_gap > 1e-6 * r.lhs);
}

TEST_CASE("Henon mass and identity") {
  const PolarGrid g = build_grid(128, 16, 0.0, 2.0);
  const DiskSolution s = solve_newton(HenonProblem{3.0, 0.0}, g);
  const PohozaevReport r = pohozaev_report(s);
  CHECK(r.relative_residual < 1e-3);
  CHECK(r.rhs_integral == doctest::Approx(-r.flux).epsilon(1e-8));
  std::vector<double> powered(s.values.size());
  for (std::size_t k = 0; k < powered.size(); ++k) powered[k] = std::pow(s.values[k], 4.0);
  CHECK(mass(s) == doctest::Approx(3.0 * integrate(g, powered, Weight::Singular)).epsilon(1e-12));
}

TEST_CASE("system identity on the Toda pair") {
  Eigen::MatrixXd a(2, 2);
  a << 2, -1, -1, 2;
  SystemProblem p{a, {1.0, 0.5}, {0.0, 0.0}, {PotentialField::constant(1.0), tilted_field()}};
  const PolarGrid g = build_grid(128, 64, 0.0);
  const auto s = solve_system(p, g);
  const SystemPohozaevReport r = system_pohozaev_report(s, a);
  CHECK(r.relative_residual < 1e-3);
  REQUIRE(r.masses.size() == 2);
  CHECK((r.inverse * a - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
  // -flux_i = sum_j a_ij m_j
  for (int i = 0; i < 2; ++i) {
    const double expected = a(i, 0) * r.masses[0] + a(i, 1) * r.masses[1];
    CHECK(-r.fluxes[static_cast<std::size_t>(i)] == doctest::Approx(expected).epsilon(1e-8));
  }
  CHECK(to_json(r).contains("relative_residual"));
}

TEST_CASE("identity errors") {
  const PolarGrid g = build_grid(32, 16, 0.0);
  const RadialOracle o = radial_oracle(0.0, 1.0);
  auto problem = std::make_shared<const ProblemSpec>(LiouvilleProblem{o.lambda, 0.0});
  const DiskSolution unconverged = assemble_solution(g, o.sample(g), problem, 1.0, false, 3);
  CHECK(code_of([&] { pohozaev_report(unconverged); }) == ErrorCode::NotConverged);

  Eigen::MatrixXd a(2, 2);
  a << 2, -1, -1, 2;
  SystemProblem p{a, {0.5, 0.5}, {0.0, 0.0}, {PotentialField::constant(1.0), PotentialField::constant(1.0)}};
  const auto s = solve_system(p, g);
  CHECK(code_of([&] { pohozaev_report(s[0]); }) == ErrorCode::UnsupportedProblem);
  CHECK(code_of([&] { system_pohozaev_report(s, Eigen::MatrixXd::Ones(2, 2)); }) == ErrorCode::SingularMatrix);
  CHECK(code_of([&] { system_pohozaev_report(s, Eigen::MatrixXd::Identity(3, 3)); }) == ErrorCode::InvalidParameter);
}

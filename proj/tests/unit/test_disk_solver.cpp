#include "doctest.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "confmass/disk_solver.hpp"
#include "confmass/radial_oracle.hpp"
#include "test_support.hpp"

using namespace confmass;
using testing::code_of;

namespace {

std::vector<double> nodal(const PolarGrid& g, double (*f)(double, double)) {
  std::vector<double> v(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j) v[static_cast<std::size_t>(g.index(i, j))] = f(g.radii[i], g.angle(j));
  return v;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double mms_error(int n) {
  // w = (r - r^3) cos t solves -Lap w = 8 r cos t with w = 0 at r = 1.
  const PolarGrid g = build_grid(n, n, 0.0);
  const auto f = nodal(g, [](double r, double t) { return 8 * r * std::cos(t); });
  const auto exact = nodal(g, [](double r, double t) { return (r - r * r * r) * std::cos(t); });
  return max_diff(solve_poisson(g, f), exact);
}

double oracle_error(const LiouvilleProblem& p, const RadialOracle& o, int n_r, int n_theta) {
  const PolarGrid g = build_grid(n_r, n_theta, p.alpha);
  const DiskSolution s = solve_newton(p, g);
  return max_diff(s.values, o.sample(g));
}

}  // namespace

TEST_CASE("Poisson solver converges at second order") {
  const double e32 = mms_error(32), e64 = mms_error(64), e128 = mms_error(128);
  CHECK(e64 < 1e-4);
  CHECK(e32 / e64 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(e64 / e128 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("matrix and matrix-free Laplacian agree") {
  const PolarGrid g = build_grid(24, 16, 0.0, 1.5);
  const auto v = nodal(g, [](double r, double t) { return std::exp(r) * std::sin(2 * t) + r * r; });
  const Eigen::SparseMatrix<double> a = laplacian_matrix(g);
  const Eigen::VectorXd av = a * Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  const auto lv = apply_laplacian(g, v);
  for (std::size_t k = 0; k < lv.size(); ++k) CHECK(lv[k] == doctest::Approx(av[static_cast<Eigen::Index>(k)]).epsilon(1e-12));
}

TEST_CASE("torsion function: boundary derivative and flux") {
  const PolarGrid g = build_grid(64, 32, 0.0);
  const std::vector<double> ones(static_cast<std::size_t>(g.size()), 1.0);
  const auto v = solve_poisson(g, ones);
  for (double d : boundary_normal_derivative(g, v)) CHECK(d == doctest::Approx(-0.5).epsilon(1e-4));
  // Divergence theorem: flux + int f = 0.
  const DiskSolution s = solve_newton(GeneralProblem{0.0, PotentialField::constant(1.0), linear_nonlinearity()}, g);
  CHECK(s.flux() == doctest::Approx(-kPi).epsilon(1e-4));
  CHECK(max_diff(s.values, v) < 1e-12);
}

TEST_CASE("Liouville solution matches the radial family") {
  SUBCASE("alpha = 0, lambda = 1") {
    const RadialOracle o = radial_oracle(0.0, 3.0 - 2.0 * std::sqrt(2.0));
    REQUIRE(o.lambda == doctest::Approx(1.0).epsilon(1e-14));
    LiouvilleProblem p{1.0, 0.0};
    const double e1 = oracle_error(p, o, 64, 32), e2 = oracle_error(p, o, 128, 32);
    CHECK(e2 < 1e-4);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  }
  SUBCASE("alpha = 0.5 through the oracle's own lambda") {
    const RadialOracle o = radial_oracle(0.5, 0.4);
    LiouvilleProblem p{o.lambda, 0.5};
    CHECK(oracle_error(p, o, 128, 32) < 2e-4);
  }
  SUBCASE("exponential general problem is the same equation") {
    const PolarGrid g = build_grid(64, 32, 0.0);
    const DiskSolution a = solve_newton(LiouvilleProblem{1.0, 0.0}, g);
    const DiskSolution b = solve_newton(GeneralProblem{0.0, PotentialField::constant(1.0), exponential_nonlinearity()}, g);
    CHECK(max_diff(a.values, b.values) < 1e-10);
  }
}

TEST_CASE("solution bookkeeping") {
  const PolarGrid g = build_grid(64, 32, 0.0);
  const DiskSolution s = solve_newton(LiouvilleProblem{1.0, 0.0}, g);
  CHECK(s.converged);
  CHECK(s.residual < 1e-10);
  CHECK(s.iterations == static_cast<int>(s.residual_history.size()) - 1);
  CHECK(s.sup_norm == doctest::Approx(*std::max_element(s.values.begin(), s.values.end())));
  CHECK(nonlinear_residual(*s.problem, g, s.values) == doctest::Approx(s.residual).epsilon(1e-3));
  for (double v : s.values) CHECK(v > 0.0);

  const DiskSolution zero = solve_newton(LiouvilleProblem{0.0, 0.0}, g);
  CHECK(zero.sup_norm == 0.0);
}

TEST_CASE("Henon ground state is positive and radial") {
  const PolarGrid g = build_grid(64, 32, 0.0, 2.0);
  const DiskSolution s = solve_newton(HenonProblem{3.0, 0.5}, g);
  CHECK(s.converged);
  for (double v : s.values) CHECK(v > 0.0);
  for (int i = 0; i < g.n_r; i += 9)
    for (int j = 1; j < g.n_theta; ++j) CHECK(s.value(i, j) == doctest::Approx(s.value(i, 0)).epsilon(1e-8));
  const DiskSolution t = henon_ground_state(HenonProblem{3.0, 0.5}, g);
  CHECK(max_diff(s.values, t.values) < 1e-8);
}

TEST_CASE("system reductions") {
  const PolarGrid g = build_grid(64, 32, 0.0);
  const DiskSolution scalar = solve_newton(LiouvilleProblem{1.0, 0.0}, g);

  SUBCASE("one component with a = 2") {
    SystemProblem p{Eigen::MatrixXd::Constant(1, 1, 2.0), {0.5}, {0.0}, {PotentialField::constant(1.0)}};
    const auto s = solve_system(p, g);
    REQUIRE(s.size() == 1);
    CHECK(max_diff(s[0].values, scalar.values) < 1e-10);
  }
  SUBCASE("symmetric Toda pair") {
    Eigen::MatrixXd a(2, 2);
    a << 2, -1, -1, 2;
    SystemProblem p{a, {1.0, 1.0}, {0.0, 0.0}, {PotentialField::constant(1.0), PotentialField::constant(1.0)}};
    const auto s = solve_system(p, g);
    REQUIRE(s.size() == 2);
    CHECK(s[1].component == 1);
    CHECK(max_diff(s[0].values, scalar.values) < 1e-10);
    CHECK(max_diff(s[1].values, scalar.values) < 1e-10);
  }
}

TEST_CASE("solver errors") {
  const PolarGrid g = build_grid(32, 16, 0.0);
  CHECK(code_of([&] { solve_newton(LiouvilleProblem{-1.0, 0.0}, g); }) == ErrorCode::InvalidParameter);
  const PolarGrid steep = build_grid(32, 16, -0.95);
  CHECK(code_of([&] { solve_newton(LiouvilleProblem{0.5, -0.95}, steep); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([&] { solve_newton(HenonProblem{1.0, 0.0}, g); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([&] { solve_newton(LiouvilleProblem{1.0, 0.0}, g, {}, {-1.0, 50, false}); }) == ErrorCode::InvalidParameter);
  const std::vector<double> wrong(7, 0.0);
  CHECK(code_of([&] { solve_newton(LiouvilleProblem{1.0, 0.0}, g, wrong); }) == ErrorCode::InvalidParameter);

  SystemProblem singular{Eigen::MatrixXd::Ones(2, 2), {1.0, 1.0}, {0.0, 0.0},
                         {PotentialField::constant(1.0), PotentialField::constant(1.0)}};
  CHECK(code_of([&] { solve_system(singular, g); }) == ErrorCode::SingularMatrix);
  CHECK(code_of([&] { solve_newton(singular, g); }) == ErrorCode::UnsupportedProblem);

  // Past the fold there is no solution; the failure carries the last iterate.
  try {
    solve_newton(LiouvilleProblem{2.5, 0.0}, g);
    FAIL("expected divergence");
  } catch (const NewtonFailure& e) {
    CHECK(e.code() == ErrorCode::NewtonDiverged);
    REQUIRE(e.last().size() == 1);
    CHECK_FALSE(e.last()[0].converged);
    CHECK(e.last()[0].residual > 1e-10);
  }
}

TEST_CASE("extreme alpha is allowed on request") {
  // Most of the weight r^{-1.9} sits in the innermost cell, so accuracy
  // improves only slowly; refinement and grading still help.
  const RadialOracle o = radial_oracle(-0.95, 0.5);
  const NewtonOptions opts{1e-10, 50, true};
  auto mass_error = [&](int n_r, double grading) {
    const PolarGrid g = build_grid(n_r, 16, -0.95, grading);
    const DiskSolution s = solve_newton(LiouvilleProblem{o.lambda, -0.95}, g, {}, opts);
    REQUIRE(s.converged);
    return std::abs(-s.flux() / o.mass - 1.0);
  };
  const double coarse = mass_error(64, 1.0);
  const double fine = mass_error(256, 2.0);
  CHECK(coarse < 0.25);
  CHECK(fine < 0.6 * coarse);
}

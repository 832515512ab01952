#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "confmass/continuation.hpp"
#include "confmass/csv.hpp"
#include "confmass/pohozaev.hpp"
#include "confmass/radial_oracle.hpp"
#include "test_support.hpp"

using namespace confmass;
using testing::code_of;

TEST_CASE("center value is exact for a + b r^2") {
  const PolarGrid g = build_grid(32, 16, 0.0, 1.7);
  std::vector<double> v(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      v[static_cast<std::size_t>(g.index(i, j))] = 1.25 - 0.7 * g.radii[i] * g.radii[i] + 0.3 * g.radii[i] * std::cos(g.angle(j));
  CHECK(center_value(g, v) == doctest::Approx(1.25).epsilon(1e-13));
}

TEST_CASE("solve at a prescribed center value") {
  const PolarGrid g = build_grid(128, 32, 0.0);
  const double s = 2.0 * std::log(2.0);
  const CenterSolve cs = solve_at_center(LiouvilleProblem{}, s, g, {}, 1.0);
  const RadialOracle o = radial_oracle(0.0, oracle_b_for_center(s));
  CHECK(cs.solution.converged);
  CHECK(cs.lambda == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(center_value(g, cs.solution.values) == doctest::Approx(s).epsilon(1e-10));
  double err = 0.0;
  const auto exact = o.sample(g);
  for (std::size_t k = 0; k < exact.size(); ++k) err = std::max(err, std::abs(cs.solution.values[k] - exact[k]));
  CHECK(err < 2e-5);
  CHECK(mass(cs.solution) == doctest::Approx(4 * kPi).epsilon(1e-4));
}

TEST_CASE("Liouville branch passes the fold") {
  const PolarGrid g = build_grid(64, 16, 0.0);
  ContinuationOptions opts;
  opts.keep_solutions = true;
  const ContinuationBranch b = continuation_branch(LiouvilleProblem{}, 0.1, 2 * std::log(101.0), 24, g, opts);
  REQUIRE_FALSE(b.truncated);
  REQUIRE(b.points.size() == 24);
  CHECK(b.solutions.size() == b.points.size());
  for (std::size_t k = 1; k < b.points.size(); ++k) {
    CHECK(b.points[k].s > b.points[k - 1].s);
    CHECK(b.points[k].mass > b.points[k - 1].mass);
  }
  for (const BranchPoint& p : b.points) {
    CHECK(p.mass < 8 * kPi * (1 + 1e-3));
    CHECK(p.residual < 1e-8);
    // lambda(s) follows the closed form up to discretization error.
    CHECK(p.parameter == doctest::Approx(radial_oracle(0.0, oracle_b_for_center(p.s)).lambda).epsilon(5e-3));
  }
  REQUIRE(b.fold.has_value());
  CHECK(b.fold->parameter == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(b.fold->s == doctest::Approx(2 * std::log(2.0)).epsilon(0.1));
  CHECK(b.max_parameter() >= b.points.front().parameter);
  CHECK(b.max_mass() == b.points.back().mass);
  CHECK(b.max_mass() > 0.95 * 8 * kPi);
}

TEST_CASE("branch input validation") {
  const PolarGrid g = build_grid(32, 16, 0.0);
  const std::vector<double> decreasing{1.0, 0.5};
  CHECK(code_of([&] { continuation_branch(LiouvilleProblem{}, decreasing, g); }) == ErrorCode::InvalidParameter);
  const std::vector<double> nonpositive{0.0, 0.5};
  CHECK(code_of([&] { continuation_branch(LiouvilleProblem{}, nonpositive, g); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([&] { continuation_branch(LiouvilleProblem{}, 1.0, 0.5, 10, g); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([&] { continuation_branch(LiouvilleProblem{}, 0.1, 0.5, 1, g); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("Henon sweep in p") {
  const PolarGrid g = build_grid(64, 16, 0.0, 3.0);
  const std::vector<double> ps{2.0, 3.0, 5.0};
  const ContinuationBranch b = henon_sweep(HenonProblem{}, ps, g);
  REQUIRE(b.points.size() == 3);
  for (std::size_t k = 0; k < ps.size(); ++k) CHECK(b.points[k].parameter == ps[k]);
  CHECK(b.points[1].sup_norm < b.points[0].sup_norm);
  CHECK(b.points[2].sup_norm < b.points[1].sup_norm);
  for (const BranchPoint& p : b.points) CHECK(p.s == doctest::Approx(p.sup_norm).epsilon(1e-2));
}

TEST_CASE("branch CSV") {
  const PolarGrid g = build_grid(32, 16, 0.0);
  const std::vector<double> s{0.5, 1.0};
  const ContinuationBranch b = continuation_branch(LiouvilleProblem{}, s, g);
  const auto path = (std::filesystem::temp_directory_path() / "confmass_branch_test.csv").string();
  write_branch_csv(b, path);
  const CsvTable t = read_csv(path);
  CHECK(t.header == std::vector<std::string>{"s", "lambda_or_p", "mass", "sup_norm", "residual"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][static_cast<std::size_t>(t.column("s"))] == 1.0);
  CHECK(t.rows[0][static_cast<std::size_t>(t.column("mass"))] == b.points[0].mass);
  std::filesystem::remove(path);
}

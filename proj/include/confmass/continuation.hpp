#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "confmass/disk_solver.hpp"

namespace confmass {

struct BranchPoint {
  double s = 0.0;          ///< center value v(0)
  double parameter = 0.0;  ///< lambda (Liouville) or p (Henon)
  double mass = 0.0;
  double sup_norm = 0.0;
  double residual = 0.0;
};

/// Location where lambda(s) peaks, refined by a parabola through the
/// discrete maximum and its two neighbours.
struct FoldEstimate {
  double s = 0.0;
  double parameter = 0.0;
};

struct ContinuationBranch {
  std::vector<BranchPoint> points;
  std::vector<DiskSolution> solutions;  ///< kept only when requested
  std::optional<FoldEstimate> fold;
  bool truncated = false;
  std::string message;

  double max_parameter() const;
  double max_mass() const;
};

struct ContinuationOptions {
  NewtonOptions newton;
  bool keep_solutions = false;
  int max_bisections = 4;
};

/// Center value extrapolated from the two innermost ring averages, exact
/// for profiles a + b r^2.
double center_value(const PolarGrid& grid, std::span<const double> v);

/// Solves {-Lap v = lambda |y|^{2a} K e^v, center_value(v) = s} for (v, lambda).
/// `family.lambda` is ignored. Throws NewtonFailure on divergence.
struct CenterSolve {
  DiskSolution solution;
  double lambda = 0.0;
};
CenterSolve solve_at_center(const LiouvilleProblem& family, double s, const PolarGrid& grid,
                            std::span<const double> guess, double lambda_guess, const NewtonOptions& options = {});

/// Center-value continuation of the Liouville family over n_steps equispaced
/// values in [s_min, s_max]; failed steps are bisected, and if that does not
/// help the branch is returned truncated.
ContinuationBranch continuation_branch(const LiouvilleProblem& family, double s_min, double s_max, int n_steps,
                                       const PolarGrid& grid, const ContinuationOptions& options = {});
/// Same continuation over an explicit increasing list of center values.
ContinuationBranch continuation_branch(const LiouvilleProblem& family, std::span<const double> s_values,
                                       const PolarGrid& grid, const ContinuationOptions& options = {});

/// Henon solutions for the listed exponents, each warm-started from the
/// normalized shape of the previous one. Entries are ordered by p.
ContinuationBranch henon_sweep(const HenonProblem& family, std::span<const double> p_values,
                               const PolarGrid& grid, const ContinuationOptions& options = {});

void write_branch_csv(const ContinuationBranch& branch, const std::string& path);

}  // namespace confmass

#pragma once

#include <Eigen/SparseCore>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "confmass/error.hpp"
#include "confmass/grid.hpp"
#include "confmass/problem.hpp"

namespace confmass {

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  /// Permit alpha outside (-0.9, 10]; a warning is printed instead of failing.
  bool allow_extreme_alpha = false;
};

/// One converged (or last-iterate) field on the disk. For systems each
/// component is stored separately and `component` records its index.
struct DiskSolution {
  PolarGrid grid;
  std::vector<double> values;             ///< node values, index(i, j)
  std::vector<double> normal_derivative;  ///< d_nu v at r = 1, one per angle
  double residual = 0.0;                  ///< relative weighted max norm of -Lap v - RHS(v)
  double sup_norm = 0.0;
  std::shared_ptr<const ProblemSpec> problem;
  int component = 0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;

  double value(int i, int j) const { return values[static_cast<std::size_t>(grid.index(i, j))]; }
  /// Boundary flux sum_j d_nu v(theta_j) dtheta.
  double flux() const;
};

/// Raised when Newton stalls or exceeds max_iter; carries the last iterate.
class NewtonFailure : public Error {
 public:
  NewtonFailure(const std::string& message, std::vector<DiskSolution> last);
  const std::vector<DiskSolution>& last() const noexcept { return last_; }

 private:
  std::vector<DiskSolution> last_;
};

/// Matrix of -Lap_h with the Dirichlet condition at r = 1 folded in.
Eigen::SparseMatrix<double> laplacian_matrix(const PolarGrid& grid);

/// -Lap_h v for node values v.
std::vector<double> apply_laplacian(const PolarGrid& grid, std::span<const double> v);

/// Solves -Lap_h v = f, v = 0 on r = 1.
std::vector<double> solve_poisson(const PolarGrid& grid, std::span<const double> f);

/// One-sided three-point d_nu v at r = 1 using v = 0 there.
std::vector<double> boundary_normal_derivative(const PolarGrid& grid, std::span<const double> v);

/// Area-weighted max norm: max |r_ij| * (cell area / mean cell area).
double weighted_max_norm(const PolarGrid& grid, std::span<const double> r);

/// Field samples at the grid nodes.
std::vector<double> sample_on_grid(const PotentialField& field, const PolarGrid& grid);

/// Discrete right-hand side RHS(v) of a scalar problem (cell-averaged weight).
std::vector<double> problem_rhs(const ProblemSpec& problem, const PolarGrid& grid,
                                std::span<const double> v);

/// Checks the alpha range policy; throws InvalidParameter or warns.
void check_alpha_policy(const ProblemSpec& problem, const NewtonOptions& options);

/// Newton for Liouville, Henon and General problems. An empty guess means
/// zero, except for Henon where zero is the trivial solution and a positive
/// guess is built by normalized fixed-point iteration.
DiskSolution solve_newton(const ProblemSpec& problem, const PolarGrid& grid,
                          std::span<const double> initial_guess = {}, const NewtonOptions& options = {});

/// Coupled Newton on the stacked system. The guess, if given, holds all
/// components back to back.
std::vector<DiskSolution> solve_system(const SystemProblem& problem, const PolarGrid& grid,
                                       const NewtonOptions& options = {},
                                       std::span<const double> initial_guess = {});

/// Positive Henon solution started from the shape of `shape` (any positive
/// profile; empty means 1 - r^2).
DiskSolution henon_ground_state(const HenonProblem& problem, const PolarGrid& grid,
                                std::span<const double> shape = {}, const NewtonOptions& options = {});

/// Wraps externally computed node values (e.g. from continuation) as a
/// solution record, filling in the boundary derivative and sup norm.
DiskSolution assemble_solution(const PolarGrid& grid, std::vector<double> values,
                               std::shared_ptr<const ProblemSpec> problem, double residual, bool converged,
                               int iterations);

/// Relative weighted residual of a scalar problem at v (the Newton stopping norm).
double nonlinear_residual(const ProblemSpec& problem, const PolarGrid& grid, std::span<const double> v);

void write_solution_csv(const DiskSolution& solution, const std::string& path);

}  // namespace confmass

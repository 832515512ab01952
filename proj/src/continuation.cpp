#include "confmass/continuation.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "confmass/csv.hpp"
#include "confmass/geometry.hpp"
#include "confmass/pohozaev.hpp"

namespace confmass {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

struct CenterFunctional {
  std::vector<std::pair<int, double>> terms;
};

CenterFunctional center_functional(const PolarGrid& g) {
  const double r1 = g.radii[0] * g.radii[0];
  const double r2 = g.radii[1] * g.radii[1];
  CenterFunctional f;
  for (int j = 0; j < g.n_theta; ++j) {
    f.terms.emplace_back(g.index(0, j), r2 / ((r2 - r1) * g.n_theta));
    f.terms.emplace_back(g.index(1, j), -r1 / ((r2 - r1) * g.n_theta));
  }
  return f;
}

BranchPoint point_from(const DiskSolution& sol, double s, double parameter) {
  BranchPoint p;
  p.s = s;
  p.parameter = parameter;
  p.mass = mass(sol);
  p.sup_norm = sol.sup_norm;
  p.residual = sol.residual;
  return p;
}

std::optional<FoldEstimate> locate_fold(const std::vector<BranchPoint>& pts) {
  if (pts.size() < 3) return std::nullopt;
  std::size_t k = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].parameter > pts[k].parameter) k = i;
  if (k == 0 || k + 1 == pts.size()) return std::nullopt;
  const double x0 = pts[k - 1].s, x1 = pts[k].s, x2 = pts[k + 1].s;
  const double y0 = pts[k - 1].parameter, y1 = pts[k].parameter, y2 = pts[k + 1].parameter;
  // Newton form of the interpolating parabola.
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double c2 = (d12 - d01) / (x2 - x0);
  FoldEstimate f{x1, y1};
  if (c2 < 0.0) {
    const double xs = 0.5 * (x0 + x1) - d01 / (2.0 * c2);
    if (xs > x0 && xs < x2) {
      f.s = xs;
      f.parameter = y0 + d01 * (xs - x0) + c2 * (xs - x0) * (xs - x1);
    }
  }
  return f;
}

}  // namespace

double ContinuationBranch::max_parameter() const {
  double m = -INFINITY;
  for (const auto& p : points) m = std::max(m, p.parameter);
  return m;
}

double ContinuationBranch::max_mass() const {
  double m = -INFINITY;
  for (const auto& p : points) m = std::max(m, p.mass);
  return m;
}

double center_value(const PolarGrid& grid, std::span<const double> v) {
  double s = 0.0;
  for (const auto& [n, c] : center_functional(grid).terms) s += c * v[static_cast<std::size_t>(n)];
  return s;
}

CenterSolve solve_at_center(const LiouvilleProblem& family, double s, const PolarGrid& grid,
                            std::span<const double> guess, double lambda_guess, const NewtonOptions& options) {
  LiouvilleProblem base = family;
  base.lambda = std::max(lambda_guess, 0.0);
  validate(base);
  check_alpha_policy(base, options);
  const int m = grid.size();
  const auto mm = static_cast<std::size_t>(m);
  if (!guess.empty() && guess.size() != mm) fail(ErrorCode::InvalidParameter, "guess size does not match the grid");

  const SpMat a = laplacian_matrix(grid);
  const auto k = sample_on_grid(family.k, grid);
  const auto w = grid.weights_for(family.alpha);
  std::vector<double> c(mm);
  for (int n = 0; n < m; ++n)
    c[static_cast<std::size_t>(n)] = w[static_cast<std::size_t>(n / grid.n_theta)] * k[static_cast<std::size_t>(n)];
  const CenterFunctional ell = center_functional(grid);
  const double mean_area = kPi / (static_cast<double>(grid.n_r) * grid.n_theta);
  std::vector<double> cw(static_cast<std::size_t>(grid.n_r));
  for (int i = 0; i < grid.n_r; ++i)
    cw[static_cast<std::size_t>(i)] = grid.volumes[static_cast<std::size_t>(i)] * grid.dtheta / mean_area;

  Eigen::VectorXd v(m);
  if (guess.empty()) {
    for (int i = 0; i < grid.n_r; ++i) {
      const double r = grid.radii[static_cast<std::size_t>(i)];
      for (int j = 0; j < grid.n_theta; ++j) v[grid.index(i, j)] = s * (1.0 - r * r);
    }
  } else {
    for (int n = 0; n < m; ++n) v[n] = guess[static_cast<std::size_t>(n)];
  }
  double lambda = lambda_guess;

  Eigen::VectorXd e(m), f(m);
  auto evaluate = [&](const Eigen::VectorXd& x, double lam, Eigen::VectorXd& ev, Eigen::VectorXd& res) {
    for (int n = 0; n < m; ++n) ev[n] = c[static_cast<std::size_t>(n)] * std::exp(x[n]);
    res = a * x - lam * ev;
    double rn = 0.0, fn = 0.0;
    for (int n = 0; n < m; ++n) {
      const double wgt = cw[static_cast<std::size_t>(n / grid.n_theta)];
      rn = std::max(rn, std::abs(res[n]) * wgt);
      fn = std::max(fn, std::abs(lam * ev[n]) * wgt);
    }
    double g = -s;
    for (const auto& [q, coef] : ell.terms) g += coef * x[q];
    const double merit = std::max(rn / std::max(1.0, fn), std::abs(g));
    return std::pair{merit, g};
  };

  auto [merit, gval] = evaluate(v, lambda, e, f);
  std::vector<double> history{merit};
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  int iterations = 0;
  std::string failure;
  while (std::isfinite(merit) && merit >= options.tol && iterations < options.max_iter) {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(a.nonZeros()) + 2 * mm + ell.terms.size());
    for (int col = 0; col < a.outerSize(); ++col)
      for (SpMat::InnerIterator it(a, col); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    for (int n = 0; n < m; ++n) {
      t.emplace_back(n, n, -lambda * e[n]);
      t.emplace_back(n, m, -e[n]);
    }
    for (const auto& [q, coef] : ell.terms) t.emplace_back(m, q, coef);
    SpMat j(m + 1, m + 1);
    j.setFromTriplets(t.begin(), t.end());
    j.makeCompressed();
    if (!analyzed) {
      lu.analyzePattern(j);
      analyzed = true;
    }
    lu.factorize(j);
    if (lu.info() != Eigen::Success) {
      failure = "augmented Jacobian factorization failed";
      break;
    }
    Eigen::VectorXd rhs(m + 1);
    rhs.head(m) = -f;
    rhs[m] = -gval;
    const Eigen::VectorXd d = lu.solve(rhs);
    ++iterations;
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd e2(m), f2(m);
    while (step >= 1.0 / 1024.0) {
      const Eigen::VectorXd v2 = v + step * d.head(m);
      const double l2 = lambda + step * d[m];
      const auto [m2, g2] = evaluate(v2, l2, e2, f2);
      if (std::isfinite(m2) && m2 < merit) {
        v = v2;
        lambda = l2;
        e = e2;
        f = f2;
        merit = m2;
        gval = g2;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    history.push_back(merit);
    if (!accepted) {
      failure = "damped step failed to reduce the residual";
      break;
    }
  }
  const bool converged = std::isfinite(merit) && merit < options.tol && lambda >= 0.0;
  if (converged) {
    base.lambda = lambda;
  }
  auto spec = std::make_shared<const ProblemSpec>(base);
  DiskSolution sol = assemble_solution(grid, std::vector<double>(v.data(), v.data() + m), spec, merit, converged,
                                       iterations);
  sol.residual_history = history;
  if (!converged) {
    std::ostringstream os;
    if (failure.empty()) failure = lambda < 0.0 ? "negative lambda" : "iteration limit reached";
    os << "center-value Newton failed at s = " << s << " (" << failure << ", residual " << merit << ")";
    throw NewtonFailure(os.str(), {std::move(sol)});
  }
  return {std::move(sol), lambda};
}

ContinuationBranch continuation_branch(const LiouvilleProblem& family, double s_min, double s_max, int n_steps,
                                       const PolarGrid& grid, const ContinuationOptions& options) {
  if (!(s_min > 0.0) || !(s_max > s_min) || n_steps < 2)
    fail(ErrorCode::InvalidParameter, "continuation needs 0 < s_min < s_max and at least two steps");
  std::vector<double> s_values(static_cast<std::size_t>(n_steps));
  for (int step = 0; step < n_steps; ++step)
    s_values[static_cast<std::size_t>(step)] = s_min + (s_max - s_min) * step / (n_steps - 1);
  return continuation_branch(family, s_values, grid, options);
}

ContinuationBranch continuation_branch(const LiouvilleProblem& family, std::span<const double> s_values,
                                       const PolarGrid& grid, const ContinuationOptions& options) {
  if (s_values.empty() || !(s_values.front() > 0.0))
    fail(ErrorCode::InvalidParameter, "continuation needs positive center values");
  for (std::size_t q = 1; q < s_values.size(); ++q)
    if (!(s_values[q] > s_values[q - 1]))
      fail(ErrorCode::InvalidParameter, "center values must be strictly increasing");
  ContinuationBranch branch;
  std::vector<double> prev_v, prev2_v;
  double prev_s = 0.0, prev2_s = 0.0, prev_l = 0.0, prev2_l = 0.0;
  int have = 0;

  auto attempt = [&](double s) -> std::optional<CenterSolve> {
    std::vector<double> guess;
    double lg = 0.0;
    if (have >= 2) {
      const double t = (s - prev_s) / (prev_s - prev2_s);
      guess.resize(prev_v.size());
      for (std::size_t q = 0; q < guess.size(); ++q) guess[q] = prev_v[q] + t * (prev_v[q] - prev2_v[q]);
      lg = prev_l + t * (prev_l - prev2_l);
    } else if (have == 1) {
      guess = prev_v;
      for (double& x : guess) x *= s / prev_s;
      lg = prev_l;
    }
    try {
      return solve_at_center(family, s, grid, guess, lg, options.newton);
    } catch (const NewtonFailure&) {
      return std::nullopt;
    }
  };

  for (double target : s_values) {
    double trial = target;
    int bisections = 0;
    while (true) {
      auto res = attempt(trial);
      if (!res) {
        if (have == 0 || bisections >= options.max_bisections) {
          branch.truncated = true;
          std::ostringstream os;
          os << "branch truncated at s = " << trial << " after " << bisections << " bisections";
          branch.message = os.str();
          break;
        }
        trial = 0.5 * (prev_s + trial);
        ++bisections;
        continue;
      }
      branch.points.push_back(point_from(res->solution, trial, res->lambda));
      prev2_v = std::move(prev_v);
      prev2_s = prev_s;
      prev2_l = prev_l;
      prev_v = res->solution.values;
      prev_s = trial;
      prev_l = res->lambda;
      ++have;
      if (options.keep_solutions) branch.solutions.push_back(std::move(res->solution));
      if (trial == target) break;
      trial = target;
      bisections = 0;
    }
    if (branch.truncated) break;
  }
  branch.fold = locate_fold(branch.points);
  return branch;
}

ContinuationBranch henon_sweep(const HenonProblem& family, std::span<const double> p_values, const PolarGrid& grid,
                               const ContinuationOptions& options) {
  ContinuationBranch branch;
  std::vector<double> shape;
  double last_p = 0.0;
  for (double target : p_values) {
    double trial = target;
    int bisections = 0;
    while (true) {
      HenonProblem h = family;
      h.p = trial;
      std::optional<DiskSolution> sol;
      try {
        sol = henon_ground_state(h, grid, shape, options.newton);
      } catch (const NewtonFailure&) {
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PositivityLost) throw;
      }
      if (!sol) {
        if (shape.empty() || bisections >= options.max_bisections) {
          branch.truncated = true;
          std::ostringstream os;
          os << "Henon sweep stopped at p = " << trial;
          branch.message = os.str();
          break;
        }
        trial = 0.5 * (last_p + trial);
        ++bisections;
        continue;
      }
      shape = sol->values;
      last_p = trial;
      if (trial == target) {
        branch.points.push_back(point_from(*sol, center_value(grid, sol->values), trial));
        if (options.keep_solutions) branch.solutions.push_back(std::move(*sol));
        break;
      }
      trial = target;
      bisections = 0;
    }
    if (branch.truncated) break;
  }
  return branch;
}

void write_branch_csv(const ContinuationBranch& branch, const std::string& path) {
  CsvWriter out(path, {"s", "lambda_or_p", "mass", "sup_norm", "residual"});
  for (const auto& p : branch.points) out.row({p.s, p.parameter, p.mass, p.sup_norm, p.residual});
}

}  // namespace confmass

#include "confmass/disk_solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "confmass/csv.hpp"
#include "confmass/geometry.hpp"

namespace confmass {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Derivative of the quadratic through (1, 0), (r1, v1), (r2, v2) at r = 1,
// returned as the coefficients of v1 and v2.
std::pair<double, double> boundary_stencil(const PolarGrid& g) {
  const double a = 1.0 - g.radii[static_cast<std::size_t>(g.n_r - 1)];
  const double b = 1.0 - g.radii[static_cast<std::size_t>(g.n_r - 2)];
  return {-b / (a * (b - a)), a / (b * (b - a))};
}

void laplacian_triplets(const PolarGrid& g, int offset, std::vector<Triplet>& out) {
  const auto [c1, c2] = boundary_stencil(g);
  const double dt2 = g.dtheta * g.dtheta;
  for (int i = 0; i < g.n_r; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double vol = g.volumes[k];
    const double ang = (g.faces[k + 1] - g.faces[k]) / g.radii[k] / (vol * dt2);
    double inner = 0.0, outer = 0.0;
    if (i > 0) inner = g.faces[k] / (g.radii[k] - g.radii[k - 1]) / vol;
    if (i < g.n_r - 1) outer = g.faces[k + 1] / (g.radii[k + 1] - g.radii[k]) / vol;
    for (int j = 0; j < g.n_theta; ++j) {
      const int row = offset + g.index(i, j);
      const int jp = (j + 1) % g.n_theta;
      const int jm = (j + g.n_theta - 1) % g.n_theta;
      double diag = 2.0 * ang + inner + outer;
      out.emplace_back(row, offset + g.index(i, jp), -ang);
      out.emplace_back(row, offset + g.index(i, jm), -ang);
      if (i > 0) out.emplace_back(row, offset + g.index(i - 1, j), -inner);
      if (i < g.n_r - 1) {
        out.emplace_back(row, offset + g.index(i + 1, j), -outer);
      } else {
        // Outward flux through r = 1 from the one-sided stencil (face radius 1).
        diag -= c1 / vol;
        out.emplace_back(row, offset + g.index(i - 1, j), -c2 / vol);
      }
      out.emplace_back(row, row, diag);
    }
  }
}

std::vector<double> cell_weights(const PolarGrid& g) {
  const double mean = kPi / (static_cast<double>(g.n_r) * g.n_theta);
  std::vector<double> c(static_cast<std::size_t>(g.n_r));
  for (int i = 0; i < g.n_r; ++i)
    c[static_cast<std::size_t>(i)] = g.volumes[static_cast<std::size_t>(i)] * g.dtheta / mean;
  return c;
}

double weighted_norm(const PolarGrid& g, const std::vector<double>& cw, const double* r) {
  double m = 0.0;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      m = std::max(m, std::abs(r[g.index(i, j)]) * cw[static_cast<std::size_t>(i)]);
  return m;
}

// Nodewise RHS and coupling derivatives for a stack of components.
struct Block {
  int row = 0;
  int col = 0;
  std::vector<double> d;
};

struct Model {
  int components = 1;
  std::function<void(const std::vector<double>& v, std::vector<double>& rhs, std::vector<Block>* jac)>
      evaluate;
};

double second_derivative(const Nonlinearity& n, double u) {
  if (n.d2f) return n.d2f(u);
  const double h = 1e-6 * std::max(1.0, std::abs(u));
  return (n.df(u + h) - n.df(u - h)) / (2.0 * h);
}

Model scalar_model(const ProblemSpec& problem, const PolarGrid& g) {
  const int m = g.size();
  Model model;
  if (const auto* l = std::get_if<LiouvilleProblem>(&problem)) {
    auto k = sample_on_grid(l->k, g);
    const auto w = g.weights_for(l->alpha);
    std::vector<double> coef(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n)
      coef[static_cast<std::size_t>(n)] = l->lambda * w[static_cast<std::size_t>(n / g.n_theta)] *
                                          k[static_cast<std::size_t>(n)];
    model.evaluate = [coef, m](const std::vector<double>& v, std::vector<double>& rhs, std::vector<Block>* jac) {
      rhs.assign(static_cast<std::size_t>(m), 0.0);
      if (jac) *jac = {Block{0, 0, std::vector<double>(static_cast<std::size_t>(m))}};
      for (std::size_t n = 0; n < static_cast<std::size_t>(m); ++n) {
        rhs[n] = coef[n] * std::exp(v[n]);
        if (jac) (*jac)[0].d[n] = rhs[n];
      }
    };
  } else if (const auto* h = std::get_if<HenonProblem>(&problem)) {
    auto k = sample_on_grid(h->k, g);
    const auto w = g.weights_for(h->alpha);
    std::vector<double> coef(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n)
      coef[static_cast<std::size_t>(n)] = w[static_cast<std::size_t>(n / g.n_theta)] * k[static_cast<std::size_t>(n)];
    const double p = h->p;
    model.evaluate = [coef, m, p](const std::vector<double>& v, std::vector<double>& rhs, std::vector<Block>* jac) {
      rhs.assign(static_cast<std::size_t>(m), 0.0);
      if (jac) *jac = {Block{0, 0, std::vector<double>(static_cast<std::size_t>(m))}};
      for (std::size_t n = 0; n < static_cast<std::size_t>(m); ++n) {
        const double a = std::pow(std::abs(v[n]), p - 1.0);
        rhs[n] = coef[n] * a * v[n];
        if (jac) (*jac)[0].d[n] = p * coef[n] * a;
      }
    };
  } else if (const auto* gp = std::get_if<GeneralProblem>(&problem)) {
    auto wf = sample_on_grid(gp->w, g);
    const auto w = g.weights_for(gp->alpha);
    std::vector<double> coef(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n)
      coef[static_cast<std::size_t>(n)] = w[static_cast<std::size_t>(n / g.n_theta)] * wf[static_cast<std::size_t>(n)];
    const Nonlinearity nl = gp->nonlinearity;
    model.evaluate = [coef, m, nl](const std::vector<double>& v, std::vector<double>& rhs, std::vector<Block>* jac) {
      rhs.assign(static_cast<std::size_t>(m), 0.0);
      if (jac) *jac = {Block{0, 0, std::vector<double>(static_cast<std::size_t>(m))}};
      for (std::size_t n = 0; n < static_cast<std::size_t>(m); ++n) {
        rhs[n] = coef[n] * nl.df(v[n]);
        if (jac) (*jac)[0].d[n] = coef[n] * second_derivative(nl, v[n]);
      }
    };
  } else {
    fail(ErrorCode::UnsupportedProblem, "systems are solved with solve_system");
  }
  return model;
}

Model system_model(const SystemProblem& s, const PolarGrid& g) {
  const int m = g.size();
  const int n = s.components();
  std::vector<std::vector<double>> coef(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    const auto cs = static_cast<std::size_t>(c);
    auto k = sample_on_grid(s.k[cs], g);
    const auto w = g.weights_for(s.alpha[cs]);
    coef[cs].resize(static_cast<std::size_t>(m));
    for (int q = 0; q < m; ++q)
      coef[cs][static_cast<std::size_t>(q)] =
          s.lambda[cs] * w[static_cast<std::size_t>(q / g.n_theta)] * k[static_cast<std::size_t>(q)];
  }
  Model model;
  model.components = n;
  const Eigen::MatrixXd a = s.a;
  model.evaluate = [coef, a, m, n](const std::vector<double>& v, std::vector<double>& rhs, std::vector<Block>* jac) {
    const auto mm = static_cast<std::size_t>(m);
    std::vector<std::vector<double>> e(static_cast<std::size_t>(n), std::vector<double>(mm));
    for (int c = 0; c < n; ++c)
      for (std::size_t q = 0; q < mm; ++q)
        e[static_cast<std::size_t>(c)][q] = coef[static_cast<std::size_t>(c)][q] * std::exp(v[c * mm + q]);
    rhs.assign(static_cast<std::size_t>(n) * mm, 0.0);
    if (jac) jac->clear();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double aij = a(i, j);
        if (aij == 0.0) continue;
        const auto& ej = e[static_cast<std::size_t>(j)];
        for (std::size_t q = 0; q < mm; ++q) rhs[i * mm + q] += aij * ej[q];
        if (jac) {
          Block b{i, j, std::vector<double>(mm)};
          for (std::size_t q = 0; q < mm; ++q) b.d[q] = aij * ej[q];
          jac->push_back(std::move(b));
        }
      }
  };
  return model;
}

struct NewtonRun {
  std::vector<double> v;
  std::vector<double> rhs;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<double> history;
  std::string failure;
};

class NewtonEngine {
 public:
  NewtonEngine(const PolarGrid& g, Model model) : g_(g), model_(std::move(model)), cw_(cell_weights(g)) {
    laplacian_triplets(g_, 0, lap_);
  }

  double residual(const std::vector<double>& v, std::vector<double>& rhs, std::vector<double>& r) {
    model_.evaluate(v, rhs, nullptr);
    const int m = g_.size();
    r.assign(v.size(), 0.0);
    double worst = 0.0;
    for (int c = 0; c < model_.components; ++c) {
      const int off = c * m;
      Eigen::Map<const Eigen::VectorXd> vc(v.data() + off, m);
      Eigen::Map<Eigen::VectorXd> rc(r.data() + off, m);
      rc = lap_matrix() * vc;
      for (int q = 0; q < m; ++q) r[static_cast<std::size_t>(off + q)] -= rhs[static_cast<std::size_t>(off + q)];
      const double scale = std::max(1.0, weighted_norm(g_, cw_, rhs.data() + off));
      worst = std::max(worst, weighted_norm(g_, cw_, r.data() + off) / scale);
    }
    return worst;
  }

  NewtonRun run(std::vector<double> v, const NewtonOptions& opt) {
    NewtonRun out;
    std::vector<double> rhs, r;
    double norm = residual(v, rhs, r);
    out.history.push_back(norm);
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    bool analyzed = false;
    const int m = g_.size();
    const int total = m * model_.components;
    while (std::isfinite(norm) && norm >= opt.tol && out.iterations < opt.max_iter) {
      std::vector<Block> jac;
      std::vector<double> tmp;
      model_.evaluate(v, tmp, &jac);
      std::vector<Triplet> t;
      t.reserve(lap_.size() * static_cast<std::size_t>(model_.components) + jac.size() * static_cast<std::size_t>(m));
      for (int c = 0; c < model_.components; ++c)
        for (const auto& e : lap_) t.emplace_back(e.row() + c * m, e.col() + c * m, e.value());
      for (const auto& b : jac)
        for (int q = 0; q < m; ++q)
          t.emplace_back(b.row * m + q, b.col * m + q, -b.d[static_cast<std::size_t>(q)]);
      SpMat j(total, total);
      j.setFromTriplets(t.begin(), t.end());
      j.makeCompressed();
      if (!analyzed) {
        lu.analyzePattern(j);
        analyzed = true;
      }
      lu.factorize(j);
      if (lu.info() != Eigen::Success) {
        out.failure = "Jacobian factorization failed";
        break;
      }
      Eigen::Map<const Eigen::VectorXd> rv(r.data(), total);
      const Eigen::VectorXd delta = lu.solve(-rv);
      ++out.iterations;
      double step = 1.0;
      bool accepted = false;
      std::vector<double> trial(v.size()), trial_rhs, trial_r;
      while (step >= 1.0 / 1024.0) {
        for (std::size_t q = 0; q < v.size(); ++q) trial[q] = v[q] + step * delta[static_cast<Eigen::Index>(q)];
        const double trial_norm = residual(trial, trial_rhs, trial_r);
        if (std::isfinite(trial_norm) && trial_norm < norm) {
          v.swap(trial);
          rhs.swap(trial_rhs);
          r.swap(trial_r);
          norm = trial_norm;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      out.history.push_back(norm);
      if (!accepted) {
        out.failure = "damped step failed to reduce the residual";
        break;
      }
    }
    out.converged = std::isfinite(norm) && norm < opt.tol;
    if (!out.converged && out.failure.empty())
      out.failure = std::isfinite(norm) ? "iteration limit reached" : "residual is not finite";
    out.v = std::move(v);
    out.rhs = std::move(rhs);
    out.residual = norm;
    return out;
  }

  const SpMat& lap_matrix() {
    if (lap_mat_.rows() == 0) {
      lap_mat_.resize(g_.size(), g_.size());
      lap_mat_.setFromTriplets(lap_.begin(), lap_.end());
    }
    return lap_mat_;
  }

 private:
  const PolarGrid& g_;
  Model model_;
  std::vector<double> cw_;
  std::vector<Triplet> lap_;
  SpMat lap_mat_;
};

DiskSolution make_solution(const PolarGrid& g, std::vector<double> v, const NewtonRun& run,
                           std::shared_ptr<const ProblemSpec> problem, int component) {
  DiskSolution s;
  s.grid = g;
  s.values = std::move(v);
  s.normal_derivative = boundary_normal_derivative(g, s.values);
  s.residual = run.residual;
  s.sup_norm = 0.0;
  for (double x : s.values) s.sup_norm = std::max(s.sup_norm, std::abs(x));
  s.problem = std::move(problem);
  s.component = component;
  s.converged = run.converged;
  s.iterations = run.iterations;
  s.residual_history = run.history;
  return s;
}

double problem_alpha(const ProblemSpec& p) {
  if (const auto* l = std::get_if<LiouvilleProblem>(&p)) return l->alpha;
  if (const auto* h = std::get_if<HenonProblem>(&p)) return h->alpha;
  if (const auto* g = std::get_if<GeneralProblem>(&p)) return g->alpha;
  const auto& s = std::get<SystemProblem>(p);
  double worst = 0.0;
  for (double a : s.alpha)
    if (a <= -0.9 || a > 10.0) worst = a;
  return worst;
}

}  // namespace

double DiskSolution::flux() const {
  double f = 0.0;
  for (double d : normal_derivative) f += d;
  return f * grid.dtheta;
}

NewtonFailure::NewtonFailure(const std::string& message, std::vector<DiskSolution> last)
    : Error(ErrorCode::NewtonDiverged, message), last_(std::move(last)) {}

Eigen::SparseMatrix<double> laplacian_matrix(const PolarGrid& grid) {
  std::vector<Triplet> t;
  laplacian_triplets(grid, 0, t);
  SpMat a(grid.size(), grid.size());
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

std::vector<double> apply_laplacian(const PolarGrid& grid, std::span<const double> v) {
  if (v.size() != static_cast<std::size_t>(grid.size()))
    fail(ErrorCode::InvalidParameter, "node value count does not match the grid");
  const SpMat a = laplacian_matrix(grid);
  Eigen::Map<const Eigen::VectorXd> x(v.data(), grid.size());
  const Eigen::VectorXd y = a * x;
  return {y.data(), y.data() + y.size()};
}

std::vector<double> solve_poisson(const PolarGrid& grid, std::span<const double> f) {
  if (f.size() != static_cast<std::size_t>(grid.size()))
    fail(ErrorCode::InvalidParameter, "node value count does not match the grid");
  const SpMat a = laplacian_matrix(grid);
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu(a);
  if (lu.info() != Eigen::Success) fail(ErrorCode::SingularMatrix, "discrete Laplacian factorization failed");
  Eigen::Map<const Eigen::VectorXd> b(f.data(), grid.size());
  const Eigen::VectorXd x = lu.solve(b);
  return {x.data(), x.data() + x.size()};
}

std::vector<double> boundary_normal_derivative(const PolarGrid& grid, std::span<const double> v) {
  const auto [c1, c2] = boundary_stencil(grid);
  std::vector<double> d(static_cast<std::size_t>(grid.n_theta));
  for (int j = 0; j < grid.n_theta; ++j)
    d[static_cast<std::size_t>(j)] = c1 * v[static_cast<std::size_t>(grid.index(grid.n_r - 1, j))] +
                                     c2 * v[static_cast<std::size_t>(grid.index(grid.n_r - 2, j))];
  return d;
}

double weighted_max_norm(const PolarGrid& grid, std::span<const double> r) {
  return weighted_norm(grid, cell_weights(grid), r.data());
}

std::vector<double> sample_on_grid(const PotentialField& field, const PolarGrid& grid) {
  std::vector<double> out(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.n_r; ++i)
    for (int j = 0; j < grid.n_theta; ++j)
      out[static_cast<std::size_t>(grid.index(i, j))] =
          field.value(grid.radii[static_cast<std::size_t>(i)], grid.angle(j));
  return out;
}

std::vector<double> problem_rhs(const ProblemSpec& problem, const PolarGrid& grid, std::span<const double> v) {
  const Model m = scalar_model(problem, grid);
  std::vector<double> rhs;
  m.evaluate(std::vector<double>(v.begin(), v.end()), rhs, nullptr);
  return rhs;
}

void check_alpha_policy(const ProblemSpec& problem, const NewtonOptions& options) {
  std::vector<double> alphas;
  if (const auto* s = std::get_if<SystemProblem>(&problem))
    alphas = s->alpha;
  else
    alphas.push_back(problem_alpha(problem));
  for (double a : alphas) {
    if (a > -0.9 && a <= 10.0) continue;
    std::ostringstream os;
    os << "alpha = " << a << " lies outside the default range (-0.9, 10]";
    if (!options.allow_extreme_alpha) fail(ErrorCode::InvalidParameter, os.str());
    std::cerr << "warning: " << os.str() << "; quadrature accuracy may degrade\n";
  }
}

DiskSolution solve_newton(const ProblemSpec& problem, const PolarGrid& grid,
                          std::span<const double> initial_guess, const NewtonOptions& options) {
  validate(problem);
  if (std::holds_alternative<SystemProblem>(problem))
    fail(ErrorCode::UnsupportedProblem, "systems are solved with solve_system");
  if (!(options.tol > 0.0)) fail(ErrorCode::InvalidParameter, "Newton tolerance must be positive");
  check_alpha_policy(problem, options);
  if (initial_guess.empty()) {
    if (const auto* h = std::get_if<HenonProblem>(&problem)) return henon_ground_state(*h, grid, {}, options);
  } else if (initial_guess.size() != static_cast<std::size_t>(grid.size())) {
    fail(ErrorCode::InvalidParameter, "initial guess size does not match the grid");
  }
  std::vector<double> v0 = initial_guess.empty() ? std::vector<double>(static_cast<std::size_t>(grid.size()), 0.0)
                                                 : std::vector<double>(initial_guess.begin(), initial_guess.end());
  auto spec = std::make_shared<const ProblemSpec>(problem);
  NewtonEngine engine(grid, scalar_model(problem, grid));
  NewtonRun run = engine.run(std::move(v0), options);
  DiskSolution sol = make_solution(grid, run.v, run, spec, 0);
  if (!run.converged) {
    std::ostringstream os;
    os << "Newton did not converge (" << run.failure << ", residual " << run.residual << " after "
       << run.iterations << " iterations)";
    throw NewtonFailure(os.str(), {std::move(sol)});
  }
  if (std::holds_alternative<HenonProblem>(problem)) {
    const auto lowest = std::min_element(sol.values.begin(), sol.values.end());
    if (*lowest <= 0.0) {
      std::ostringstream os;
      os << "Henon solution has a nonpositive node value " << *lowest;
      fail(ErrorCode::PositivityLost, os.str());
    }
  }
  return sol;
}

std::vector<DiskSolution> solve_system(const SystemProblem& problem, const PolarGrid& grid,
                                       const NewtonOptions& options, std::span<const double> initial_guess) {
  validate(problem);
  check_alpha_policy(problem, options);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(problem.a);
  if (!lu.isInvertible()) fail(ErrorCode::SingularMatrix, "coupling matrix is singular");
  const int n = problem.components();
  const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(grid.size());
  if (!initial_guess.empty() && initial_guess.size() != total)
    fail(ErrorCode::InvalidParameter, "initial guess size does not match the stacked system");
  std::vector<double> v0 = initial_guess.empty() ? std::vector<double>(total, 0.0)
                                                 : std::vector<double>(initial_guess.begin(), initial_guess.end());
  auto spec = std::make_shared<const ProblemSpec>(problem);
  NewtonEngine engine(grid, system_model(problem, grid));
  NewtonRun run = engine.run(std::move(v0), options);
  std::vector<DiskSolution> out;
  const auto m = static_cast<std::ptrdiff_t>(grid.size());
  for (int c = 0; c < n; ++c) {
    std::vector<double> vc(run.v.begin() + c * m, run.v.begin() + (c + 1) * m);
    out.push_back(make_solution(grid, std::move(vc), run, spec, c));
  }
  if (!run.converged) {
    std::ostringstream os;
    os << "system Newton did not converge (" << run.failure << ", residual " << run.residual << ")";
    throw NewtonFailure(os.str(), std::move(out));
  }
  return out;
}

DiskSolution henon_ground_state(const HenonProblem& problem, const PolarGrid& grid, std::span<const double> shape,
                                const NewtonOptions& options) {
  validate(problem);
  check_alpha_policy(problem, options);
  const auto size = static_cast<std::size_t>(grid.size());
  std::vector<double> w(size);
  if (shape.empty()) {
    for (int i = 0; i < grid.n_r; ++i)
      for (int j = 0; j < grid.n_theta; ++j) {
        const double r = grid.radii[static_cast<std::size_t>(i)];
        w[static_cast<std::size_t>(grid.index(i, j))] = 1.0 - r * r;
      }
  } else {
    if (shape.size() != size) fail(ErrorCode::InvalidParameter, "shape size does not match the grid");
    const double top = *std::max_element(shape.begin(), shape.end());
    if (!(top > 0.0)) fail(ErrorCode::InvalidParameter, "shape must be positive somewhere");
    for (std::size_t q = 0; q < size; ++q) w[q] = std::max(shape[q], 0.0) / top;
  }
  // Normalized fixed point w <- (-Lap)^{-1}(K w^p) / max; at the fixed point
  // v = sigma^{1/(p-1)} w with sigma = 1 / max of the unnormalized update.
  const SpMat a = laplacian_matrix(grid);
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu(a);
  if (lu.info() != Eigen::Success) fail(ErrorCode::SingularMatrix, "discrete Laplacian factorization failed");
  const ProblemSpec spec = problem;
  double sigma = 1.0;
  for (int it = 0; it < 200; ++it) {
    const std::vector<double> f = problem_rhs(spec, grid, w);
    Eigen::Map<const Eigen::VectorXd> b(f.data(), grid.size());
    const Eigen::VectorXd z = lu.solve(b);
    const double top = z.maxCoeff();
    if (!(top > 0.0)) fail(ErrorCode::PositivityLost, "fixed-point iterate lost positivity");
    double change = 0.0;
    for (std::size_t q = 0; q < size; ++q) {
      const double next = z[static_cast<Eigen::Index>(q)] / top;
      change = std::max(change, std::abs(next - w[q]));
      w[q] = next;
    }
    sigma = 1.0 / top;
    if (change < 1e-6) break;
  }
  const double scale = std::pow(sigma, 1.0 / (problem.p - 1.0));
  for (double& x : w) x *= scale;
  return solve_newton(spec, grid, w, options);
}

DiskSolution assemble_solution(const PolarGrid& grid, std::vector<double> values,
                               std::shared_ptr<const ProblemSpec> problem, double residual, bool converged,
                               int iterations) {
  if (values.size() != static_cast<std::size_t>(grid.size()))
    fail(ErrorCode::InvalidParameter, "node value count does not match the grid");
  NewtonRun run;
  run.residual = residual;
  run.converged = converged;
  run.iterations = iterations;
  run.history = {residual};
  return make_solution(grid, std::move(values), run, std::move(problem), 0);
}

double nonlinear_residual(const ProblemSpec& problem, const PolarGrid& grid, std::span<const double> v) {
  if (v.size() != static_cast<std::size_t>(grid.size()))
    fail(ErrorCode::InvalidParameter, "node value count does not match the grid");
  NewtonEngine engine(grid, scalar_model(problem, grid));
  std::vector<double> rhs, r;
  return engine.residual(std::vector<double>(v.begin(), v.end()), rhs, r);
}

void write_solution_csv(const DiskSolution& solution, const std::string& path) {
  CsvWriter out(path, {"r", "theta", "v"});
  const auto& g = solution.grid;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      out.row({g.radii[static_cast<std::size_t>(i)], g.angle(j), solution.value(i, j)});
}

}  // namespace confmass

#include "confmass/pohozaev.hpp"

#include <cmath>

#include "confmass/error.hpp"
#include "confmass/geometry.hpp"

namespace confmass {

namespace {

void require_converged(const DiskSolution& s) {
  if (!s.converged) fail(ErrorCode::NotConverged, "solution did not converge");
  if (!s.problem) fail(ErrorCode::InvalidParameter, "solution carries no problem");
}

// Node data of one scalar equation in the form
//   G = |y|^{2a} k(y) g(v), RHS = |y|^{2a} k(y) g'(v).
struct Density {
  double alpha = 0.0;
  const PotentialField* field = nullptr;
  double scale = 1.0;
  std::function<double(double)> g;       // potential density in v
  std::function<double(double)> g_prime;  // its derivative (right-hand side)
  std::function<double(double)> mass_density;
};

Density density_of(const DiskSolution& s) {
  const ProblemSpec& p = *s.problem;
  Density d;
  if (const auto* l = std::get_if<LiouvilleProblem>(&p)) {
    d.alpha = l->alpha;
    d.field = &l->k;
    d.scale = l->lambda;
    d.g = [](double v) { return std::exp(v); };
    d.g_prime = d.g;
    d.mass_density = d.g;
  } else if (const auto* h = std::get_if<HenonProblem>(&p)) {
    const double q = h->p;
    d.alpha = h->alpha;
    d.field = &h->k;
    d.g = [q](double v) { return std::pow(std::abs(v), q + 1.0) / (q + 1.0); };
    d.g_prime = [q](double v) { return std::pow(std::abs(v), q - 1.0) * v; };
    d.mass_density = [q](double v) { return q * std::pow(std::abs(v), q + 1.0); };
  } else if (const auto* g = std::get_if<GeneralProblem>(&p)) {
    d.alpha = g->alpha;
    d.field = &g->w;
    d.g = g->nonlinearity.f;
    d.g_prime = g->nonlinearity.df;
    d.mass_density = g->nonlinearity.df;
  } else {
    const auto& sys = std::get<SystemProblem>(p);
    const auto c = static_cast<std::size_t>(s.component);
    d.alpha = sys.alpha[c];
    d.field = &sys.k[c];
    d.scale = sys.lambda[c];
    d.g = [](double v) { return std::exp(v); };
    d.g_prime = d.g;
    d.mass_density = d.g;
  }
  return d;
}

double weighted_integral(const DiskSolution& s, const Density& d, const std::function<double(double)>& fn) {
  const auto& g = s.grid;
  std::vector<double> vals(s.values.size());
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      const auto n = static_cast<std::size_t>(g.index(i, j));
      vals[n] = d.field->value(g.radii[static_cast<std::size_t>(i)], g.angle(j)) * fn(s.values[n]);
    }
  return d.scale * integrate_with_alpha(g, vals, d.alpha);
}

ComponentTerms terms_of(const DiskSolution& s, const Density& d) {
  const auto& g = s.grid;
  std::vector<double> area(s.values.size()), radial(s.values.size());
  for (int i = 0; i < g.n_r; ++i) {
    const double r = g.radii[static_cast<std::size_t>(i)];
    for (int j = 0; j < g.n_theta; ++j) {
      const auto n = static_cast<std::size_t>(g.index(i, j));
      const double k = d.field->value(r, g.angle(j));
      const double dk = d.field->gradient(r, g.angle(j)).d_r;
      const double gv = d.g(s.values[n]);
      area[n] = k * gv;
      radial[n] = (2.0 * d.alpha * k + r * dk) * gv;
    }
  }
  ComponentTerms t;
  t.rhs_area = 2.0 * d.scale * integrate_with_alpha(g, area, d.alpha);
  t.rhs_radial = d.scale * integrate_with_alpha(g, radial, d.alpha);
  const double g0 = d.g(0.0);
  double boundary = 0.0;
  if (g0 != 0.0) {
    for (int j = 0; j < g.n_theta; ++j) boundary += d.field->value(1.0, g.angle(j));
    boundary *= g.dtheta * g0 * d.scale;
  }
  t.rhs_boundary = boundary;
  return t;
}

double relative(double residual, double lhs) {
  if (lhs == 0.0) return residual == 0.0 ? 0.0 : INFINITY;
  return residual / std::abs(lhs);
}

}  // namespace

double mass(const DiskSolution& solution) {
  require_converged(solution);
  const Density d = density_of(solution);
  return weighted_integral(solution, d, d.mass_density);
}

double rhs_integral(const DiskSolution& solution) {
  require_converged(solution);
  // A system component is driven by sum_j a_ij m_j, which needs its siblings.
  if (std::holds_alternative<SystemProblem>(*solution.problem))
    fail(ErrorCode::UnsupportedProblem, "system right-hand sides need all components");
  const Density d = density_of(solution);
  return weighted_integral(solution, d, d.g_prime);
}

PohozaevReport pohozaev_report(const DiskSolution& solution) {
  require_converged(solution);
  if (std::holds_alternative<SystemProblem>(*solution.problem))
    fail(ErrorCode::UnsupportedProblem, "use system_pohozaev_report for systems");
  const Density d = density_of(solution);
  PohozaevReport r;
  const double dt = solution.grid.dtheta;
  for (double x : solution.normal_derivative) {
    r.lhs += 0.5 * x * x * dt;
    r.flux += x * dt;
  }
  const ComponentTerms t = terms_of(solution, d);
  r.rhs_area = t.rhs_area;
  r.rhs_radial = t.rhs_radial;
  r.rhs_boundary = t.rhs_boundary;
  r.residual = std::abs(r.lhs - (r.rhs_area + r.rhs_radial - r.rhs_boundary));
  r.relative_residual = relative(r.residual, r.lhs);
  r.mass = weighted_integral(solution, d, d.mass_density);
  r.rhs_integral = weighted_integral(solution, d, d.g_prime);
  r.holder_gap = r.lhs - r.flux * r.flux / (4.0 * kPi);
  return r;
}

SystemPohozaevReport system_pohozaev_report(const std::vector<DiskSolution>& solutions, const Eigen::MatrixXd& a) {
  const auto n = static_cast<Eigen::Index>(solutions.size());
  if (n == 0 || a.rows() != n || a.cols() != n)
    fail(ErrorCode::InvalidParameter, "coupling matrix does not match the number of components");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) fail(ErrorCode::SingularMatrix, "coupling matrix is singular");
  for (const auto& s : solutions) {
    require_converged(s);
    if (!std::holds_alternative<SystemProblem>(*s.problem))
      fail(ErrorCode::UnsupportedProblem, "system report needs system solutions");
  }
  SystemPohozaevReport r;
  r.inverse = lu.inverse();
  const auto& g = solutions.front().grid;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double cross = 0.0;
      const auto& di = solutions[static_cast<std::size_t>(i)].normal_derivative;
      const auto& dj = solutions[static_cast<std::size_t>(j)].normal_derivative;
      for (std::size_t q = 0; q < di.size(); ++q) cross += di[q] * dj[q];
      r.lhs += 0.5 * r.inverse(i, j) * cross * g.dtheta;
    }
  double rhs = 0.0;
  for (const auto& s : solutions) {
    const Density d = density_of(s);
    const ComponentTerms t = terms_of(s, d);
    rhs += t.rhs_area + t.rhs_radial - t.rhs_boundary;
    r.components.push_back(t);
    r.masses.push_back(weighted_integral(s, d, d.mass_density));
    r.fluxes.push_back(s.flux());
  }
  r.residual = std::abs(r.lhs - rhs);
  r.relative_residual = relative(r.residual, r.lhs);
  return r;
}

nlohmann::json to_json(const PohozaevReport& r) {
  return {{"lhs", r.lhs},       {"rhs_area", r.rhs_area}, {"rhs_radial", r.rhs_radial},
          {"rhs_boundary", r.rhs_boundary}, {"residual", r.residual}, {"relative_residual", r.relative_residual},
          {"mass", r.mass},     {"flux", r.flux},         {"rhs_integral", r.rhs_integral},
          {"holder_gap", r.holder_gap}};
}

nlohmann::json to_json(const SystemPohozaevReport& r) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : r.components)
    comps.push_back({{"rhs_area", c.rhs_area}, {"rhs_radial", c.rhs_radial}, {"rhs_boundary", c.rhs_boundary}});
  nlohmann::json inv = nlohmann::json::array();
  for (Eigen::Index i = 0; i < r.inverse.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < r.inverse.cols(); ++j) row.push_back(r.inverse(i, j));
    inv.push_back(row);
  }
  return {{"lhs", r.lhs},           {"components", comps}, {"residual", r.residual},
          {"relative_residual", r.relative_residual}, {"masses", r.masses}, {"fluxes", r.fluxes},
          {"inverse", inv}};
}

}  // namespace confmass

#include "confmass/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "confmass/error.hpp"

namespace confmass {

std::string_view to_string(Theorem t) noexcept {
  switch (t) {
    case Theorem::Liouville: return "liouville";
    case Theorem::Henon: return "henon";
    case Theorem::System: return "system";
    case Theorem::General: return "general";
  }
  return "unknown";
}

void MassCertificate::observe(double mass) {
  observed_masses.push_back(mass);
  const double top = *std::max_element(observed_masses.begin(), observed_masses.end());
  satisfied = satisfied && mass <= rho0;
  slack = rho0 - top;
}

void MassCertificate::observe(std::span<const double> masses) {
  for (double m : masses) observe(m);
}

namespace {

nlohmann::json field_ingredients(double alpha, const PotentialField& k) {
  const FieldExtrema& e = k.extrema();
  return {{"alpha", alpha},
          {"inf_k", e.inf_value},
          {"sup_grad_k", e.sup_gradient},
          {"scan_dr", e.scan_dr},
          {"scan_dtheta", e.scan_dtheta},
          {"refine_factor", e.refine_factor}};
}

void require_positive(const PotentialField& k) {
  if (!(k.extrema().inf_value > 0.0))
    fail(ErrorCode::NonPositivePotential, "certificate needs inf K > 0");
}

}  // namespace

double field_constant(double alpha, const PotentialField& k, double inflation) {
  require_positive(k);
  if (!(alpha > -1.0)) fail(ErrorCode::InvalidParameter, "alpha must exceed -1");
  const FieldExtrema& e = k.extrema();
  return 2.0 * (1.0 + alpha) + inflation * e.sup_gradient / e.inf_value;
}

MassCertificate liouville_certificate(double alpha, const PotentialField& k, const CertificateOptions& options) {
  MassCertificate c;
  c.theorem = Theorem::Liouville;
  const double q = field_constant(alpha, k, options.inflation);
  c.ingredients = field_ingredients(alpha, k);
  c.ingredients["inflation"] = options.inflation;
  c.rho0 = 4.0 * kPi * q;
  c.slack = c.rho0;
  c.derivation =
      "Dilation identity on the disk gives (1/2) int (d_nu v)^2 = 2m(1 + alpha) + lambda int |y|^{2a} (grad K . y) e^v"
      " - lambda int_{circle} K <= m (2(1 + alpha) + sup|grad K| / inf K); Cauchy-Schwarz on the circle gives"
      " m^2 / (4 pi) <= (1/2) int (d_nu v)^2, so m <= 4 pi (2(1 + alpha) + sup|grad K| / inf K).";
  return c;
}

MassCertificate henon_certificate(double alpha, const PotentialField& k, double c0, double p0,
                                  const CertificateOptions& options) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) fail(ErrorCode::InvalidParameter, "C0 must be positive");
  if (!(p0 > 1.0)) fail(ErrorCode::InvalidParameter, "p0 must exceed 1");
  MassCertificate c;
  c.theorem = Theorem::Henon;
  const double q = field_constant(alpha, k, options.inflation);
  c.ingredients = field_ingredients(alpha, k);
  c.ingredients["inflation"] = options.inflation;
  c.ingredients["c0"] = c0;
  c.ingredients["p0"] = p0;
  c.ingredients["c0_empirical"] = true;
  c.rho0 = 8.0 * kPi * c0 * c0 * q;
  c.slack = c.rho0;
  c.derivation =
      "Same dilation argument as the Liouville bound with G = |y|^{2a} K v^{p+1} / (p+1), using p / (p+1) <= 1 and"
      " the uniform bound sup v <= C0 for p >= p0: m <= 8 pi C0^2 (2(1 + alpha) + sup|grad K| / inf K)."
      " C0 is a measured value, so the bound is conditional on it.";
  return c;
}

MassCertificate system_certificate(const Eigen::MatrixXd& a, std::span<const double> alphas,
                                   std::span<const PotentialField> ks, const CertificateOptions& options) {
  const auto n = a.rows();
  if (n < 1 || a.cols() != n || alphas.size() != static_cast<std::size_t>(n) || ks.size() != alphas.size())
    fail(ErrorCode::InvalidParameter, "system certificate sizes disagree");
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()))
    fail(ErrorCode::NotPositiveDefinite, "coupling matrix is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) fail(ErrorCode::NotPositiveDefinite, "Cholesky factorization of A failed");
  double cmax = 0.0;
  nlohmann::json comps = nlohmann::json::array();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double q = field_constant(alphas[i], ks[i], options.inflation);
    cmax = std::max(cmax, q);
    auto ing = field_ingredients(alphas[i], ks[i]);
    ing["constant"] = q;
    comps.push_back(ing);
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.inverse());
  const double mu = eig.eigenvalues().minCoeff();
  MassCertificate c;
  c.theorem = Theorem::System;
  c.rho0 = 4.0 * kPi * cmax * std::sqrt(static_cast<double>(n)) / mu;
  c.slack = c.rho0;
  nlohmann::json eigs = nlohmann::json::array();
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) eigs.push_back(eig.eigenvalues()[i]);
  c.ingredients = {{"components", comps}, {"c", cmax}, {"mu", mu}, {"inverse_eigenvalues", eigs},
                   {"n", n}, {"inflation", options.inflation}};
  c.derivation =
      "With m the vector of component masses, the system identity and Cauchy-Schwarz give (mu / 4 pi) |m|^2 <="
      " sum a^{ij} m_i m_j / (4 pi) <= C sum m_i <= C sqrt(N) |m|, mu the least eigenvalue of A^{-1},"
      " C = max_i (2(1 + alpha_i) + sup|grad K_i| / inf K_i); hence each m_i <= |m| <= 4 pi C sqrt(N) / mu.";
  return c;
}

ConditionConstants validate_general_conditions(const PotentialField& w, double alpha, const Nonlinearity& f,
                                               double u_max, int u_samples) {
  if (!(u_max > 0.0) || u_samples < 2) fail(ErrorCode::InvalidParameter, "u range must be nonempty");
  if (!f.f || !f.df) fail(ErrorCode::InvalidParameter, "F and F' are required");
  if (!(alpha > -1.0)) fail(ErrorCode::InvalidParameter, "alpha must exceed -1");
  ConditionConstants c;
  c.u_max = u_max;
  c.u_samples = u_samples;

  // Weight conditions on the node lattice of the field, pole excluded.
  const int nr = w.n_r() * 4, nt = w.n_theta() * 4;
  for (int i = 1; i <= nr; ++i) {
    const double r = static_cast<double>(i) / nr;
    for (int j = 0; j < nt; ++j) {
      const double t = kTwoPi * j / nt;
      const double wv = w.value(r, t);
      if (!std::isfinite(wv) || wv < 0.0) fail(ErrorCode::ConditionsViolated, "weight is negative or not finite");
      c.c_alpha = std::max(c.c_alpha, wv);
      if (wv <= 0.0) continue;
      const PolarGradient g = w.gradient(r, t);
      const double radial = 2.0 * alpha + r * g.d_r / wv;
      const double angular = g.d_theta / wv;
      c.c_w = std::max(c.c_w, std::hypot(radial, angular));
    }
  }
  c.c_alpha = std::max(c.c_alpha, w.sample(0, 0));
  c.weight_integral = w.integral(alpha);

  std::vector<double> us(static_cast<std::size_t>(u_samples)), dfs(us.size());
  double best = -INFINITY;
  std::size_t best_at = 0;
  for (std::size_t q = 0; q < us.size(); ++q) {
    const double u = u_max * static_cast<double>(q) / (u_samples - 1);
    const double fv = f.f(u), dv = f.df(u);
    if (!std::isfinite(fv) || !std::isfinite(dv) || dv < 0.0)
      fail(ErrorCode::ConditionsViolated, "F or F' is not finite or F' < 0 on the sampled range");
    const double ratio = fv / (1.0 + dv);
    if (ratio > best) {
      best = ratio;
      best_at = q;
    }
    us[q] = u;
    dfs[q] = dv;
  }
  c.c_f = std::max(best, 0.0);
  c.c_f_at_range_end = best_at + 1 == us.size() && best > 0.0;

  auto growth_ok = [&](double cc) {
    for (std::size_t q = 0; q < us.size(); ++q)
      if (dfs[q] > cc * std::exp(std::min(cc * us[q] * us[q], 700.0))) return false;
    return true;
  };
  double lo = 0.0, hi = 1.0;
  while (!growth_ok(hi)) {
    hi *= 2.0;
    if (hi > 1e6) fail(ErrorCode::ConditionsViolated, "F' exceeds every Gaussian bound on the sampled range");
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (growth_ok(mid) ? hi : lo) = mid;
  }
  c.growth = hi;
  return c;
}

MassCertificate general_certificate(const ConditionConstants& k) {
  if (!(k.c_w >= 0.0) || !(k.c_f >= 0.0) || !(k.weight_integral >= 0.0) || !std::isfinite(k.c_w) ||
      !std::isfinite(k.c_f) || !std::isfinite(k.weight_integral))
    fail(ErrorCode::ConditionsViolated, "condition constants must be finite and nonnegative");
  MassCertificate c;
  c.theorem = Theorem::General;
  const double b = k.c_f * (2.0 + k.c_w);
  if (b == 0.0) {
    c.rho0 = 0.0;
    c.degenerate = true;
  } else {
    c.rho0 = 2.0 * kPi * b * (1.0 + std::sqrt(1.0 + k.weight_integral / (kPi * b)));
  }
  c.slack = c.rho0;
  c.ingredients = {{"c_w", k.c_w},
                   {"c_alpha", k.c_alpha},
                   {"c_f", k.c_f},
                   {"growth", k.growth},
                   {"weight_integral", k.weight_integral},
                   {"u_max", k.u_max},
                   {"u_samples", k.u_samples},
                   {"c_f_grows_with_range", k.c_f_at_range_end},
                   {"degenerate", c.degenerate}};
  c.derivation =
      "The dilation identity with G = W F(v) and |grad W||y| <= C_W W gives m^2 / (4 pi) <= (2 + C_W) int W F(v)"
      " <= C_F (2 + C_W)(m + int W) using F <= C_F (1 + F'); rho0 is the larger root of"
      " M^2 / (4 pi) = C_F (2 + C_W)(M + int W).";
  return c;
}

nlohmann::json to_json(const MassCertificate& c) {
  return {{"theorem", std::string(to_string(c.theorem))},
          {"ingredients", c.ingredients},
          {"rho0", c.rho0},
          {"derivation", c.derivation},
          {"observed_masses", c.observed_masses},
          {"satisfied", c.satisfied},
          {"slack", c.slack},
          {"degenerate", c.degenerate}};
}

}  // namespace confmass

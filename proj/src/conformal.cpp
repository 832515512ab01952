#include "confmass/conformal.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "confmass/csv.hpp"
#include "confmass/error.hpp"

namespace confmass {

namespace {

constexpr double kInverseTol = 1e-14;
constexpr double kMaxRayStep = 0.05;

}  // namespace

Point ConformalMap::cauchy(std::span<const Point> boundary_values, Point z) const {
  Point num{0.0, 0.0};
  Point den{0.0, 0.0};
  for (std::size_t j = 0; j < gamma_.size(); ++j) {
    const Point diff = gamma_[j] - z;
    if (std::abs(diff) < 1e-14) return boundary_values[j];
    const Point c = dgamma_[j] / diff;
    num += boundary_values[j] * c;
    den += c;
  }
  return num / den;
}

bool ConformalMap::contains(Point z) const { return polygon_contains(polygon_, z); }

Point ConformalMap::log_ratio(Point z) const { return cauchy(g_trace_, z); }

Point ConformalMap::forward(Point z) const {
  if (!contains(z)) {
    std::ostringstream os;
    os << "point (" << z.real() << ", " << z.imag() << ") is not inside the domain";
    fail(ErrorCode::PointOutsideDomain, os.str());
  }
  return z * std::exp(log_ratio(z));
}

Point ConformalMap::derivative(Point z) const {
  return std::exp(log_ratio(z)) * (1.0 + z * cauchy(dg_trace_, z));
}

Point ConformalMap::newton_inverse(Point y, Point start) const {
  Point z = start;
  for (int it = 0; it < 60; ++it) {
    const Point g = log_ratio(z);
    const Point eg = std::exp(g);
    const Point phi = z * eg;
    const Point dphi = eg * (1.0 + z * cauchy(dg_trace_, z));
    const Point dz = (phi - y) / dphi;
    z -= dz;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
    if (std::abs(dz) <= kInverseTol * (1.0 + std::abs(z))) return z;
  }
  std::ostringstream os;
  os << "inverse map Newton iteration failed at y = (" << y.real() << ", " << y.imag() << ")";
  fail(ErrorCode::MapSolverDiverged, os.str());
}

std::vector<Point> ConformalMap::inverse_ray(double angle, std::span<const double> radii) const {
  const Point dir = std::polar(1.0, angle);
  std::vector<Point> out;
  out.reserve(radii.size());
  Point z{0.0, 0.0};
  double r_prev = 0.0;
  for (double r : radii) {
    if (!(r >= 0.0 && r < 1.0))
      fail(ErrorCode::PointOutsideDomain, "inverse map needs |y| < 1");
    if (r < r_prev) fail(ErrorCode::InvalidParameter, "inverse_ray radii must be increasing");
    const int substeps = std::max(1, static_cast<int>(std::ceil((r - r_prev) / kMaxRayStep)));
    for (int s = 1; s <= substeps; ++s) {
      const double rs = r_prev + (r - r_prev) * s / substeps;
      const double rp = r_prev + (r - r_prev) * (s - 1) / substeps;
      if (rs == 0.0) {
        z = 0.0;
        continue;
      }
      const Point predictor = z + (rs - rp) * dir / derivative(z);
      z = newton_inverse(rs * dir, predictor);
    }
    if (r > 0.0 && !contains(z)) {
      std::ostringstream os;
      os << "inverse map left the domain at radius " << r;
      fail(ErrorCode::MapSolverDiverged, os.str());
    }
    out.push_back(z);
    r_prev = r;
  }
  return out;
}

Point ConformalMap::inverse(Point y) const {
  const double rho = std::abs(y);
  if (!(rho < 1.0)) fail(ErrorCode::PointOutsideDomain, "inverse map needs |y| < 1");
  if (rho == 0.0) return {0.0, 0.0};
  const double radius[] = {rho};
  return inverse_ray(std::arg(y), radius).front();
}

BoundaryCorrespondence ConformalMap::at_boundary_angle(double angle) const {
  const double theta0 = theta_.front();
  double target = std::fmod(angle - theta0, kTwoPi);
  if (target < 0.0) target += kTwoPi;
  target += theta0;

  // Bracket in the node table, then safeguarded Newton on theta(t) = target.
  const std::size_t n = t_.size();
  const double h = kTwoPi / static_cast<double>(n);
  auto it = std::upper_bound(theta_.begin(), theta_.end(), target);
  const std::size_t k = static_cast<std::size_t>(std::distance(theta_.begin(), it)) - 1;
  double lo = t_[k];
  double hi = k + 1 < n ? t_[k + 1] : kTwoPi;
  auto theta_of = [&](double t) { return t + theta_offset_.value(t); };
  double t = lo + h * 0.5;
  for (int iter = 0; iter < 100; ++iter) {
    const double f = theta_of(t) - target;
    if (std::abs(f) < 1e-15) break;
    if (f > 0) hi = t; else lo = t;
    const double step = f / (1.0 + theta_offset_.derivative(t));
    double next = t - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) < 1e-16) {
      t = next;
      break;
    }
    t = next;
  }
  const double dtheta = 1.0 + theta_offset_.derivative(t);
  return {t, domain_.point(t), std::abs(domain_.derivative(t)) / dtheta};
}

ConformalMap compute_map(const DomainSpec& domain, int n_boundary_nodes) {
  if (n_boundary_nodes < 64 || n_boundary_nodes % 2 != 0)
    fail(ErrorCode::InvalidParameter, "n_boundary_nodes must be even and at least 64");

  const auto n = static_cast<std::size_t>(n_boundary_nodes);
  const double h = kTwoPi / static_cast<double>(n);

  ConformalMap map;
  map.domain_ = domain;
  map.t_.resize(n);
  map.gamma_.resize(n);
  map.dgamma_.resize(n);
  std::vector<Point> ddgamma(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = h * static_cast<double>(k);
    map.t_[k] = t;
    map.gamma_[k] = domain.point(t);
    map.dgamma_[k] = domain.derivative(t);
    ddgamma[k] = domain.second_derivative(t);
  }
  const auto& gamma = map.gamma_;
  const auto& dgamma = map.dgamma_;

  // Interior Dirichlet problem for Re G = -log|z| via the double layer
  // 1/2 mu + K mu = f; the kernel is smooth with a curvature diagonal.
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd f(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) {
        a(k, j) = 0.5 + h * (ddgamma[k] / dgamma[k]).imag() / (2.0 * kTwoPi);
      } else {
        a(k, j) = h * (dgamma[j] / (gamma[j] - gamma[k])).imag() / kTwoPi;
      }
    }
    f(k) = -std::log(std::abs(gamma[k]));
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Eigen::VectorXd mu = lu.solve(f);
  map.equation_residual_ = (a * mu - f).lpNorm<Eigen::Infinity>();
  if (!std::isfinite(map.equation_residual_) || map.equation_residual_ > 1e-10) {
    std::ostringstream os;
    os << "integral equation residual " << map.equation_residual_ << " (rcond " << lu.rcond() << ")";
    fail(ErrorCode::MapSolverDiverged, os.str());
  }

  std::vector<Complex> mu_c(n);
  for (std::size_t k = 0; k < n; ++k) mu_c[k] = mu(static_cast<Eigen::Index>(k));
  const std::vector<Complex> dmu = periodic_derivative(mu_c);

  // Boundary trace of F(z) = (1/2 pi i) int mu(w) / (w - z) dw, singularity subtracted.
  const Point inv_2pi_i = 1.0 / Point(0.0, kTwoPi);
  std::vector<Point> trace(n);
  for (std::size_t k = 0; k < n; ++k) {
    Point sum = dmu[k].real();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == k) continue;
      sum += (mu(static_cast<Eigen::Index>(j)) - mu(static_cast<Eigen::Index>(k))) * dgamma[j] /
             (gamma[j] - gamma[k]);
    }
    trace[k] = mu(static_cast<Eigen::Index>(k)) + h * inv_2pi_i * sum;
  }
  map.g_trace_ = trace;
  const double im0 = map.cauchy(trace, {0.0, 0.0}).imag();
  for (auto& g : map.g_trace_) g -= Point(0.0, im0);

  const std::vector<Complex> dg_dt = periodic_derivative(map.g_trace_);
  map.dg_trace_.resize(n);
  for (std::size_t k = 0; k < n; ++k) map.dg_trace_[k] = dg_dt[k] / dgamma[k];

  map.modulus_residual_ = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double modulus = std::abs(gamma[k]) * std::exp(map.g_trace_[k].real());
    map.modulus_residual_ = std::max(map.modulus_residual_, std::abs(modulus - 1.0));
  }
  map.spectral_tail_ = confmass::spectral_tail(map.g_trace_);
  if (!std::isfinite(map.modulus_residual_) || map.modulus_residual_ > 1e-10) {
    std::ostringstream os;
    os << "boundary modulus residual " << map.modulus_residual_ << " with spectral tail "
       << map.spectral_tail_ << "; increase n_boundary_nodes";
    fail(ErrorCode::MapSolverDiverged, os.str());
  }

  // Boundary correspondence, unwrapped to a continuous increasing angle.
  map.theta_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double th = std::arg(gamma[k]) + map.g_trace_[k].imag();
    if (k == 0) {
      th = std::remainder(th, kTwoPi);
    } else {
      const double prev = map.theta_[k - 1];
      th = prev + std::remainder(th - prev, kTwoPi);
    }
    map.theta_[k] = th;
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (!(map.theta_[k] > map.theta_[k - 1]))
      fail(ErrorCode::MapSolverDiverged, "boundary correspondence is not increasing");
  }
  if (!(map.theta_.back() < map.theta_.front() + kTwoPi))
    fail(ErrorCode::MapSolverDiverged, "boundary correspondence does not close");

  std::vector<double> offset(n);
  for (std::size_t k = 0; k < n; ++k) offset[k] = map.theta_[k] - map.t_[k];
  map.theta_offset_ = TrigInterpolant(offset);

  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dtheta = 1.0 + map.theta_offset_.derivative(map.t_[k]);
    const double modulus = dtheta / std::abs(dgamma[k]);
    if (!std::isfinite(modulus) || modulus <= 0.0) {
      std::ostringstream os;
      os << "boundary derivative of the map is not positive at node " << k << " (rcond "
         << lu.rcond() << ")";
      fail(ErrorCode::DomainTooDistorted, os.str());
    }
    dmin = std::min(dmin, modulus);
    dmax = std::max(dmax, modulus);
  }
  map.distortion_ = dmax / dmin;
  if (map.distortion_ > 1e12) {
    std::ostringstream os;
    os << "conformal factor spans " << map.distortion_ << " (rcond " << lu.rcond() << ")";
    fail(ErrorCode::DomainTooDistorted, os.str());
  }

  map.phi_prime_0_ = std::exp(map.cauchy(map.g_trace_, {0.0, 0.0}).real());
  map.polygon_ = domain.sample(std::max(8 * n_boundary_nodes, 4096));
  return map;
}

Point map_point(const ConformalMap& map, Point point, MapDirection direction) {
  return direction == MapDirection::Forward ? map.forward(point) : map.inverse(point);
}

double conformal_factor(const ConformalMap& map, Point y) {
  const Point z = map.inverse(y);
  return 1.0 / std::norm(map.derivative(z));
}

void write_map_csv(const ConformalMap& map, const std::string& path) {
  CsvWriter out(path, {"t", "theta", "gamma_x", "gamma_y"});
  for (int k = 0; k < map.size(); ++k) {
    const auto q = static_cast<std::size_t>(k);
    out.row({map.t()[q], map.theta()[q], map.gamma()[q].real(), map.gamma()[q].imag()});
  }
}

}  // namespace confmass

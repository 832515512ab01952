#include "confmass/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "confmass/csv.hpp"
#include "confmass/error.hpp"

namespace confmass {

namespace {

// Cubic Lagrange basis on nodes {-1, 0, 1, 2} at local coordinate x.
void lagrange4(double x, double (&l)[4], double (&dl)[4]) {
  const double nodes[4] = {-1.0, 0.0, 1.0, 2.0};
  for (int a = 0; a < 4; ++a) {
    double value = 1.0;
    double denom = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (b == a) continue;
      value *= x - nodes[b];
      denom *= nodes[a] - nodes[b];
    }
    double deriv = 0.0;
    for (int c = 0; c < 4; ++c) {
      if (c == a) continue;
      double prod = 1.0;
      for (int b = 0; b < 4; ++b) {
        if (b == a || b == c) continue;
        prod *= x - nodes[b];
      }
      deriv += prod;
    }
    l[a] = value / denom;
    dl[a] = deriv / denom;
  }
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

}  // namespace

PotentialField::PotentialField(int n_r, int n_theta, std::vector<double> samples, FieldSign sign)
    : n_r_(n_r), n_theta_(n_theta), sign_(sign), samples_(std::move(samples)) {
  if (n_r_ < 3 || n_theta_ < 8 || n_theta_ % 2 != 0)
    fail(ErrorCode::InvalidParameter, "potential grid needs n_r >= 3 and even n_theta >= 8");
  if (samples_.size() != static_cast<std::size_t>((n_r_ + 1) * n_theta_))
    fail(ErrorCode::InvalidParameter, "potential sample count does not match the grid");
  for (double v : samples_) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFiniteValue, "potential sample is not finite");
    if (sign_ == FieldSign::Positive && v <= 0.0) {
      std::ostringstream os;
      os << "potential sample " << v << " is not positive";
      fail(ErrorCode::NonPositivePotential, os.str());
    }
  }
  scan_extrema();
}

PotentialField PotentialField::from_function(int n_r, int n_theta, FieldSign sign,
                                             const std::function<double(double, double)>& f) {
  std::vector<double> samples(static_cast<std::size_t>((n_r + 1) * n_theta));
  for (int i = 0; i <= n_r; ++i)
    for (int j = 0; j < n_theta; ++j)
      samples[static_cast<std::size_t>(i * n_theta + j)] =
          f(static_cast<double>(i) / n_r, kTwoPi * j / n_theta);
  return PotentialField(n_r, n_theta, std::move(samples), sign);
}

PotentialField PotentialField::constant(double value, int n_r, int n_theta) {
  return PotentialField(n_r, n_theta,
                        std::vector<double>(static_cast<std::size_t>((n_r + 1) * n_theta), value),
                        FieldSign::Positive);
}

double PotentialField::sample(int i, int j) const {
  j %= n_theta_;
  if (j < 0) j += n_theta_;
  if (i < 0) {
    // Reflection through the origin: f(-r, theta) = f(r, theta + pi).
    i = -i;
    j = (j + n_theta_ / 2) % n_theta_;
  }
  return samples_[static_cast<std::size_t>(i * n_theta_ + j)];
}

void PotentialField::evaluate(double r, double theta, double* value, double* d_r,
                              double* d_theta) const {
  r = std::clamp(r, 0.0, 1.0);
  theta = wrap_angle(theta);
  const double s = r * n_r_;
  const int i0 = std::min(static_cast<int>(std::floor(s)), n_r_ - 1);
  int start = i0 - 1;
  if (start + 3 > n_r_) start = n_r_ - 3;
  const double dtheta = kTwoPi / n_theta_;
  const double u_full = theta / dtheta;
  const int j0 = std::min(static_cast<int>(std::floor(u_full)), n_theta_ - 1);
  double lr[4], dlr[4], lt[4], dlt[4];
  lagrange4(s - (start + 1), lr, dlr);
  lagrange4(u_full - j0, lt, dlt);
  double v = 0.0, vr = 0.0, vt = 0.0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double f = sample(start + a, j0 - 1 + b);
      v += lr[a] * lt[b] * f;
      vr += dlr[a] * lt[b] * f;
      vt += lr[a] * dlt[b] * f;
    }
  }
  if (value) *value = v;
  if (d_r) *d_r = vr * n_r_;
  if (d_theta) *d_theta = vt / dtheta;
}

double PotentialField::value(double r, double theta) const {
  double v = 0.0;
  evaluate(r, theta, &v, nullptr, nullptr);
  return v;
}

PolarGradient PotentialField::gradient(double r, double theta) const {
  PolarGradient g;
  evaluate(r, theta, nullptr, &g.d_r, &g.d_theta);
  return g;
}

double PotentialField::gradient_norm(double r, double theta) const {
  if (r < 1e-6) {
    // At the pole the radial derivative along two orthogonal rays spans the gradient.
    const double gx = gradient(0.0, 0.0).d_r;
    const double gy = gradient(0.0, 0.5 * kPi).d_r;
    return std::hypot(gx, gy);
  }
  const PolarGradient g = gradient(r, theta);
  return std::hypot(g.d_r, g.d_theta / r);
}

double PotentialField::min_sample() const {
  return *std::min_element(samples_.begin(), samples_.end());
}

void PotentialField::scan_extrema() {
  const double dr = 1.0 / n_r_;
  const double dt = kTwoPi / n_theta_;
  extrema_.scan_dr = dr;
  extrema_.scan_dtheta = dt;
  extrema_.refine_factor = 3;

  int inf_i = 0, inf_j = 0, sup_i = 0, sup_j = 0;
  double inf_v = std::numeric_limits<double>::infinity();
  double sup_g = -1.0;
  for (int i = 0; i <= n_r_; ++i) {
    for (int j = 0; j < n_theta_; ++j) {
      const double v = sample(i, j);
      if (v < inf_v) {
        inf_v = v;
        inf_i = i;
        inf_j = j;
      }
      const double g = gradient_norm(radius(i), angle(j));
      if (g > sup_g) {
        sup_g = g;
        sup_i = i;
        sup_j = j;
      }
      if (i == 0) break;  // the pole row holds a single point
    }
  }

  // One local pass at 3x resolution over the neighbouring cells.
  const int f = extrema_.refine_factor;
  auto refine = [&](int ci, int cj, auto&& score) {
    double best_r = radius(ci), best_t = angle(cj);
    double best = score(best_r, best_t);
    for (int a = -f; a <= f; ++a) {
      const double r = radius(ci) + a * dr / f;
      if (r < 0.0 || r > 1.0) continue;
      for (int b = -f; b <= f; ++b) {
        const double t = angle(cj) + b * dt / f;
        const double s = score(r, t);
        if (s > best) {
          best = s;
          best_r = r;
          best_t = t;
        }
      }
    }
    return std::pair<double, Point>{best, std::polar(best_r, best_t)};
  };
  const auto [neg_inf, inf_loc] = refine(inf_i, inf_j, [&](double r, double t) { return -value(r, t); });
  const auto [sup, sup_loc] = refine(sup_i, sup_j, [&](double r, double t) { return gradient_norm(r, t); });
  extrema_.inf_value = std::min(inf_v, -neg_inf);
  extrema_.inf_location = inf_loc;
  extrema_.sup_gradient = std::max(sup_g, sup);
  extrema_.sup_gradient_location = sup_loc;
}

double PotentialField::integral(double alpha) const {
  if (!(alpha > -1.0)) fail(ErrorCode::SingularityMismatch, "alpha must exceed -1");
  const int refine = 4;
  const int cells = n_r_ * refine;
  const double e = 2.0 * alpha + 2.0;
  const double dt = kTwoPi / n_theta_;
  double total = 0.0;
  for (int c = 0; c < cells; ++c) {
    const double a = static_cast<double>(c) / cells;
    const double b = static_cast<double>(c + 1) / cells;
    const double moment = (std::pow(b, e) - std::pow(a, e)) / e;
    const double mid = 0.5 * (a + b);
    double ring = 0.0;
    for (int j = 0; j < n_theta_; ++j) ring += value(mid, angle(j));
    total += moment * ring * dt;
  }
  return total;
}

PotentialField PotentialField::scaled(double c) const {
  std::vector<double> s = samples_;
  for (double& v : s) v *= c;
  return PotentialField(n_r_, n_theta_, std::move(s), sign_);
}

double evaluate(const AnalyticField& field, Point x) {
  struct Visitor {
    Point x;
    double operator()(const ConstantField& c) const { return c.value; }
    double operator()(const AffineField& a) const { return a.c0 + a.cx * x.real() + a.cy * x.imag(); }
    double operator()(const GaussianBumpField& g) const {
      return 1.0 + g.amplitude * std::exp(-std::norm(x - g.center) / (2.0 * g.sigma * g.sigma));
    }
  };
  return std::visit(Visitor{x}, field);
}

std::string describe(const AnalyticField& field) {
  std::ostringstream os;
  if (const auto* c = std::get_if<ConstantField>(&field)) {
    os << "constant(" << c->value << ")";
  } else if (const auto* a = std::get_if<AffineField>(&field)) {
    os << "affine(" << a->c0 << ", " << a->cx << ", " << a->cy << ")";
  } else if (const auto* g = std::get_if<GaussianBumpField>(&field)) {
    os << "gaussian_bump(center=(" << g->center.real() << ", " << g->center.imag()
       << "), sigma=" << g->sigma << ", amplitude=" << g->amplitude << ")";
  }
  return os.str();
}

namespace {

PotentialField transport(const ConformalMap& map, double alpha,
                         const std::function<double(Point)>& data, PotentialGridSpec grid,
                         FieldSign sign) {
  if (!(alpha > -1.0)) fail(ErrorCode::SingularityMismatch, "alpha must exceed -1");
  const int m = grid.n_r;
  const int nt = grid.n_theta;
  if (m < 3 || nt < 8 || nt % 2 != 0)
    fail(ErrorCode::InvalidParameter, "potential grid needs n_r >= 3 and even n_theta >= 8");

  std::vector<double> samples(static_cast<std::size_t>((m + 1) * nt));
  auto at = [&](int i, int j) -> double& { return samples[static_cast<std::size_t>(i * nt + j)]; };

  // Pole: ratio |Phi^{-1}(y)| / |y| -> 1 / Phi'(0).
  const double inv_d0 = 1.0 / map.phi_prime_at_origin();
  const double pole = data({0.0, 0.0}) * std::pow(inv_d0, 2.0 * alpha + 2.0);
  for (int j = 0; j < nt; ++j) at(0, j) = pole;

  std::vector<double> radii(static_cast<std::size_t>(m - 1));
  for (int i = 1; i < m; ++i) radii[static_cast<std::size_t>(i - 1)] = static_cast<double>(i) / m;

  for (int j = 0; j < nt; ++j) {
    const double angle = kTwoPi * j / nt;
    const std::vector<Point> zs = map.inverse_ray(angle, radii);
    for (int i = 1; i < m; ++i) {
      const Point z = zs[static_cast<std::size_t>(i - 1)];
      const double y_abs = static_cast<double>(i) / m;
      const double ratio = y_abs < 1e-6 ? inv_d0 : std::exp(-map.log_ratio(z).real());
      const double factor = 1.0 / std::norm(map.derivative(z));
      at(i, j) = data(z) * std::pow(ratio, 2.0 * alpha) * factor;
    }
    const BoundaryCorrespondence bc = map.at_boundary_angle(angle);
    at(m, j) = data(bc.x) * std::pow(std::abs(bc.x), 2.0 * alpha) * bc.inverse_derivative *
               bc.inverse_derivative;
  }
  for (double v : samples) {
    if (sign == FieldSign::Positive && !(v > 0.0))
      fail(ErrorCode::NonPositivePotential, "transported potential is not positive");
    if (sign == FieldSign::NonNegative && !(v >= 0.0))
      fail(ErrorCode::NonPositivePotential, "transported weight is negative");
  }
  return PotentialField(m, nt, std::move(samples), sign);
}

}  // namespace

PotentialField transform_potential(const ConformalMap& map, double alpha,
                                   const std::function<double(Point)>& k_on_domain,
                                   PotentialGridSpec grid) {
  return transport(map, alpha, k_on_domain, grid, FieldSign::Positive);
}

PotentialField transform_weight(const ConformalMap& map,
                                const std::function<double(Point)>& w_on_domain,
                                PotentialGridSpec grid) {
  return transport(map, 0.0, w_on_domain, grid, FieldSign::NonNegative);
}

void write_potential_csv(const PotentialField& field, const std::string& path) {
  CsvWriter out(path, {"r", "theta", "value"});
  for (int i = 0; i <= field.n_r(); ++i)
    for (int j = 0; j < field.n_theta(); ++j)
      out.row({field.radius(i), field.angle(j), field.sample(i, j)});
}

}  // namespace confmass

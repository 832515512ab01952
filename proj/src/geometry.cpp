#include "confmass/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "confmass/error.hpp"

namespace confmass {

namespace {

double reduce_angle(double t) {
  double r = std::fmod(t, kTwoPi);
  return r < 0.0 ? r + kTwoPi : r;
}

TrigSeries polar_to_x(const TrigSeries& radius) {
  TrigSeries x;
  for (std::size_t k = 0; k < radius.cos_coeffs.size(); ++k) {
    const double c = radius.cos_coeffs[k];
    x.add_term(static_cast<int>(k) + 1, true, 0.5 * c);
    x.add_term(static_cast<int>(k) - 1, true, 0.5 * c);
  }
  for (std::size_t k = 1; k < radius.sin_coeffs.size(); ++k) {
    const double s = radius.sin_coeffs[k];
    x.add_term(static_cast<int>(k) + 1, false, 0.5 * s);
    x.add_term(static_cast<int>(k) - 1, false, 0.5 * s);
  }
  return x;
}

TrigSeries polar_to_y(const TrigSeries& radius) {
  TrigSeries y;
  for (std::size_t k = 0; k < radius.cos_coeffs.size(); ++k) {
    const double c = radius.cos_coeffs[k];
    y.add_term(static_cast<int>(k) + 1, false, 0.5 * c);
    y.add_term(static_cast<int>(k) - 1, false, -0.5 * c);
  }
  for (std::size_t k = 1; k < radius.sin_coeffs.size(); ++k) {
    const double s = radius.sin_coeffs[k];
    y.add_term(static_cast<int>(k) - 1, true, 0.5 * s);
    y.add_term(static_cast<int>(k) + 1, true, -0.5 * s);
  }
  return y;
}

double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
         d4 != 0;
}

void check_finite_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    std::ostringstream os;
    os << name << " must be positive and finite, got " << v;
    fail(ErrorCode::InvalidParameter, os.str());
  }
}

}  // namespace

double TrigSeries::derivative(double t, int order) const {
  double sum = 0.0;
  const std::size_t n = std::max(cos_coeffs.size(), sin_coeffs.size());
  for (std::size_t k = 0; k < n; ++k) {
    const double a = k < cos_coeffs.size() ? cos_coeffs[k] : 0.0;
    const double b = (k > 0 && k < sin_coeffs.size()) ? sin_coeffs[k] : 0.0;
    if (a == 0.0 && b == 0.0) continue;
    const double kk = static_cast<double>(k);
    const double c = std::cos(kk * t);
    const double s = std::sin(kk * t);
    // d^m/dt^m of (a cos kt + b sin kt) cycles with period 4 in m.
    const double scale = std::pow(kk, order);
    switch (order % 4) {
      case 0: sum += scale * (a * c + b * s); break;
      case 1: sum += scale * (-a * s + b * c); break;
      case 2: sum += scale * (-a * c - b * s); break;
      default: sum += scale * (a * s - b * c); break;
    }
  }
  return sum;
}

std::size_t TrigSeries::degree() const {
  std::size_t d = 0;
  for (std::size_t k = 0; k < cos_coeffs.size(); ++k)
    if (cos_coeffs[k] != 0.0) d = std::max(d, k);
  for (std::size_t k = 1; k < sin_coeffs.size(); ++k)
    if (sin_coeffs[k] != 0.0) d = std::max(d, k);
  return d;
}

void TrigSeries::add_term(int frequency, bool is_cosine, double coefficient) {
  if (coefficient == 0.0) return;
  if (frequency < 0) {
    frequency = -frequency;
    if (!is_cosine) coefficient = -coefficient;
  }
  const auto k = static_cast<std::size_t>(frequency);
  if (!is_cosine && k == 0) return;
  auto& target = is_cosine ? cos_coeffs : sin_coeffs;
  if (target.size() <= k) target.resize(k + 1, 0.0);
  target[k] += coefficient;
}

std::string_view kind_name(const DomainShape& shape) {
  struct Visitor {
    std::string_view operator()(const UnitDisk&) const { return "unit_disk"; }
    std::string_view operator()(const Ellipse&) const { return "ellipse"; }
    std::string_view operator()(const FourierBlob&) const { return "fourier_blob"; }
    std::string_view operator()(const Dumbbell&) const { return "dumbbell"; }
  };
  return std::visit(Visitor{}, shape);
}

Point DomainSpec::point(double t) const { return {x_.value(t), y_.value(t)}; }

Point DomainSpec::derivative(double t) const {
  return {x_.derivative(t, 1), y_.derivative(t, 1)};
}

Point DomainSpec::second_derivative(double t) const {
  return {x_.derivative(t, 2), y_.derivative(t, 2)};
}

std::vector<Point> DomainSpec::sample(int n) const {
  std::vector<Point> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = point(kTwoPi * k / n);
  return out;
}

TrigSeries dumbbell_radius(double neck_width) {
  // eps + (1 - eps) cos^2 t has an exact degree-2 Fourier expansion.
  TrigSeries r;
  r.cos_coeffs = {0.5 * (1.0 + neck_width), 0.0, 0.5 * (1.0 - neck_width)};
  r.sin_coeffs = {0.0, 0.0, 0.0};
  return r;
}

DomainSpec build_domain(const DomainShape& shape, int n_validation_samples) {
  if (n_validation_samples < 16)
    fail(ErrorCode::InvalidParameter, "n_validation_samples must be at least 16");

  DomainSpec d;
  d.shape_ = shape;
  d.n_validation_samples_ = n_validation_samples;

  if (std::holds_alternative<UnitDisk>(shape)) {
    d.x_.cos_coeffs = {0.0, 1.0};
    d.y_.sin_coeffs = {0.0, 1.0};
  } else if (const auto* e = std::get_if<Ellipse>(&shape)) {
    check_finite_positive(e->a, "ellipse semi-axis a");
    check_finite_positive(e->b, "ellipse semi-axis b");
    d.x_.cos_coeffs = {0.0, e->a};
    d.y_.sin_coeffs = {0.0, e->b};
  } else if (const auto* blob = std::get_if<FourierBlob>(&shape)) {
    if (blob->cos_coeffs.empty())
      fail(ErrorCode::InvalidParameter, "fourier_blob needs at least the constant radius term");
    TrigSeries radius{blob->cos_coeffs, blob->sin_coeffs};
    for (double c : blob->cos_coeffs)
      if (!std::isfinite(c)) fail(ErrorCode::InvalidParameter, "non-finite fourier_blob coefficient");
    for (double s : blob->sin_coeffs)
      if (!std::isfinite(s)) fail(ErrorCode::InvalidParameter, "non-finite fourier_blob coefficient");
    d.x_ = polar_to_x(radius);
    d.y_ = polar_to_y(radius);
  } else if (const auto* db = std::get_if<Dumbbell>(&shape)) {
    if (!(db->neck_width > 0.0 && db->neck_width < 1.0))
      fail(ErrorCode::InvalidParameter, "dumbbell neck width must lie in (0, 1)");
    const TrigSeries radius = dumbbell_radius(db->neck_width);
    d.x_ = polar_to_x(radius);
    d.y_ = polar_to_y(radius);
  }

  const std::vector<Point> pts = d.sample(n_validation_samples);
  const auto n = pts.size();
  for (const Point& p : pts) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      fail(ErrorCode::InvalidParameter, "boundary parametrization is not finite");
    if (std::abs(p) == 0.0) fail(ErrorCode::OriginOutsideDomain, "boundary passes through the origin");
  }

  // Sampled simplicity: no two non-adjacent polygon edges may cross or touch.
  for (std::size_t i = 0; i < n; ++i) {
    const Point a1 = pts[i];
    const Point a2 = pts[(i + 1) % n];
    const double ax0 = std::min(a1.real(), a2.real()), ax1 = std::max(a1.real(), a2.real());
    const double ay0 = std::min(a1.imag(), a2.imag()), ay1 = std::max(a1.imag(), a2.imag());
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Point b1 = pts[j];
      const Point b2 = pts[(j + 1) % n];
      if (std::max(b1.real(), b2.real()) < ax0 || std::min(b1.real(), b2.real()) > ax1 ||
          std::max(b1.imag(), b2.imag()) < ay0 || std::min(b1.imag(), b2.imag()) > ay1)
        continue;
      if (segments_intersect(a1, a2, b1, b2) || std::abs(a1 - b1) == 0.0) {
        std::ostringstream os;
        os << "boundary edges " << i << " and " << j << " intersect";
        fail(ErrorCode::SelfIntersectingBoundary, os.str());
      }
    }
  }

  const double w = winding_number(d, n_validation_samples);
  if (std::abs(w - 1.0) > 1e-6) {
    if (std::abs(w + 1.0) < 1e-6)
      fail(ErrorCode::InvalidParameter, "boundary must be oriented counterclockwise");
    std::ostringstream os;
    os << "winding number around the origin is " << w;
    fail(ErrorCode::OriginOutsideDomain, os.str());
  }
  return d;
}

BoundaryFrame boundary_point(const DomainSpec& domain, double t) {
  t = reduce_angle(t);
  const Point p = domain.point(t);
  const Point d = domain.derivative(t);
  const Point tangent = d / std::abs(d);
  // Rotation by -pi/2: (tx, ty) -> (ty, -tx).
  const Point normal{tangent.imag(), -tangent.real()};
  return {p, tangent, normal};
}

double winding_number(const DomainSpec& domain, int samples, Point center) {
  const std::vector<Point> pts = domain.sample(samples);
  double total = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Point a = pts[k] - center;
    const Point b = pts[(k + 1) % pts.size()] - center;
    total += std::arg(b / a);
  }
  return total / kTwoPi;
}

double half_width_at(const DomainSpec& domain, double x0) {
  const int n = std::max(domain.n_validation_samples(), 512);
  double best = std::numeric_limits<double>::infinity();
  auto f = [&](double t) { return domain.point(t).real() - x0; };
  for (int k = 0; k < n; ++k) {
    double a = kTwoPi * k / n;
    double b = kTwoPi * (k + 1) / n;
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) {
      best = std::min(best, std::abs(domain.point(a).imag()));
      continue;
    }
    if ((fa > 0) == (fb > 0)) continue;
    for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    best = std::min(best, std::abs(domain.point(0.5 * (a + b)).imag()));
  }
  return best;
}

bool polygon_contains(const std::vector<Point>& polygon, Point p) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = polygon[i];
    const Point b = polygon[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      const double x = (b.real() - a.real()) * (p.imag() - a.imag()) / (b.imag() - a.imag()) + a.real();
      if (p.real() < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace confmass

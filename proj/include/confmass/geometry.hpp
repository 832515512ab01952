#pragma once

#include <complex>
#include <string_view>
#include <variant>
#include <vector>

namespace confmass {

/// Points of the plane are handled as complex numbers throughout.
using Point = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Truncated real Fourier series a_0 + sum_k (a_k cos kt + b_k sin kt).
/// sin_coeffs[0] is carried for symmetry and ignored.
struct TrigSeries {
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;

  double value(double t) const { return derivative(t, 0); }
  double derivative(double t, int order) const;
  std::size_t degree() const;
  void add_term(int frequency, bool is_cosine, double coefficient);
};

struct UnitDisk {};
struct Ellipse {
  double a = 1.0;
  double b = 1.0;
};
/// Star-shaped curve gamma(t) = r(t) (cos t, sin t) with r a Fourier series.
struct FourierBlob {
  std::vector<double> cos_coeffs;
  std::vector<double> sin_coeffs;
};
/// Pinched peanut r(t) = eps + (1 - eps) cos^2 t; neck half-width eps at x = 0.
struct Dumbbell {
  double neck_width = 0.5;
};

using DomainShape = std::variant<UnitDisk, Ellipse, FourierBlob, Dumbbell>;

std::string_view kind_name(const DomainShape& shape);

/// Smooth Jordan domain containing the origin. Immutable once built.
class DomainSpec {
 public:
  const DomainShape& shape() const noexcept { return shape_; }
  const TrigSeries& x_series() const noexcept { return x_; }
  const TrigSeries& y_series() const noexcept { return y_; }
  int n_validation_samples() const noexcept { return n_validation_samples_; }

  Point point(double t) const;
  Point derivative(double t) const;
  Point second_derivative(double t) const;

  /// Equispaced samples gamma(2 pi k / n), k = 0..n-1.
  std::vector<Point> sample(int n) const;

 private:
  friend DomainSpec build_domain(const DomainShape&, int);
  DomainShape shape_;
  TrigSeries x_;
  TrigSeries y_;
  int n_validation_samples_ = 2048;
};

struct BoundaryFrame {
  Point point;
  Point tangent;
  Point normal;  ///< outward for counterclockwise boundaries
};

/// Builds the coordinate series for `shape` and validates closedness,
/// simplicity and winding around the origin at the sampled points.
DomainSpec build_domain(const DomainShape& shape, int n_validation_samples = 2048);

BoundaryFrame boundary_point(const DomainSpec& domain, double t);

/// Winding number of the sampled boundary around `center`.
double winding_number(const DomainSpec& domain, int samples, Point center = {0.0, 0.0});

/// Polar radius coefficients of the dumbbell family.
TrigSeries dumbbell_radius(double neck_width);

/// Smallest |y| over the boundary crossings of the vertical line x = x0.
double half_width_at(const DomainSpec& domain, double x0);

/// Even-odd test against a closed polygon.
bool polygon_contains(const std::vector<Point>& polygon, Point p);

}  // namespace confmass

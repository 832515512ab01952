#pragma once

#include <span>
#include <string>
#include <vector>

#include "confmass/geometry.hpp"
#include "confmass/spectral.hpp"

namespace confmass {

enum class MapDirection { Forward, Inverse };

/// Boundary data of the Riemann map at one point of the unit circle.
struct BoundaryCorrespondence {
  double t = 0.0;                   ///< boundary parameter with arg Phi(gamma(t)) = angle
  Point x;                          ///< gamma(t)
  double inverse_derivative = 0.0;  ///< |(Phi^{-1})'| on the circle = |gamma'(t)| / theta'(t)
};

/// Discretized Riemann map Phi: Omega -> D with Phi(0) = 0 and Phi'(0) > 0.
///
/// Phi(z) = z exp(G(z)) where G is analytic in Omega with
/// Re G = -log|z| on the boundary. Re G is obtained from a second-kind
/// double-layer integral equation (Nystrom, trapezoidal rule at equispaced
/// parameter nodes); the boundary trace of G, including its harmonic
/// conjugate, follows from the singularity-subtracted Cauchy integral.
/// Interior values use the barycentric Cauchy formula on those traces,
/// which stays accurate close to the boundary.
class ConformalMap {
 public:
  const DomainSpec& domain() const noexcept { return domain_; }
  int size() const noexcept { return static_cast<int>(t_.size()); }

  /// Boundary correspondence: theta[k] = arg Phi(gamma(t[k])), unwrapped and increasing.
  const std::vector<double>& t() const noexcept { return t_; }
  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<Point>& gamma() const noexcept { return gamma_; }

  double phi_prime_at_origin() const noexcept { return phi_prime_0_; }
  /// max_k | |Phi(gamma_k)| - 1 | from the boundary trace.
  double boundary_modulus_residual() const noexcept { return modulus_residual_; }
  /// Infinity-norm residual of the discrete integral equation.
  double equation_residual() const noexcept { return equation_residual_; }
  double spectral_tail() const noexcept { return spectral_tail_; }
  /// Ratio of the largest to the smallest boundary value of |Phi'|.
  double distortion() const noexcept { return distortion_; }

  bool contains(Point z) const;

  Point forward(Point z) const;
  Point inverse(Point y) const;
  /// Phi'(z) for z in Omega.
  Point derivative(Point z) const;
  /// G(z) = log(Phi(z) / z); analytic, so the origin needs no special care.
  Point log_ratio(Point z) const;

  /// Phi^{-1} at r e^{i angle} for increasing radii in (0, 1), marching
  /// outward from the origin.
  std::vector<Point> inverse_ray(double angle, std::span<const double> radii) const;

  BoundaryCorrespondence at_boundary_angle(double angle) const;

 private:
  friend ConformalMap compute_map(const DomainSpec&, int);

  Point cauchy(std::span<const Point> boundary_values, Point z) const;
  Point newton_inverse(Point y, Point start) const;

  DomainSpec domain_;
  std::vector<double> t_;
  std::vector<Point> gamma_;
  std::vector<Point> dgamma_;
  std::vector<Point> g_trace_;
  std::vector<Point> dg_trace_;
  std::vector<double> theta_;
  std::vector<Point> polygon_;
  TrigInterpolant theta_offset_;  // theta(t) - t
  double phi_prime_0_ = 1.0;
  double modulus_residual_ = 0.0;
  double equation_residual_ = 0.0;
  double spectral_tail_ = 0.0;
  double distortion_ = 1.0;
};

ConformalMap compute_map(const DomainSpec& domain, int n_boundary_nodes);

Point map_point(const ConformalMap& map, Point point, MapDirection direction);

/// |(Phi^{-1})'(y)|^2 = 1 / det DPhi(Phi^{-1}(y)).
double conformal_factor(const ConformalMap& map, Point y);

/// Writes the boundary correspondence as t, theta, gamma_x, gamma_y rows.
void write_map_csv(const ConformalMap& map, const std::string& path);

}  // namespace confmass

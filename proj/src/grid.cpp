#include "confmass/grid.hpp"

#include <cmath>

#include "confmass/error.hpp"
#include "confmass/geometry.hpp"

namespace confmass {

PolarGrid build_grid(int n_r, int n_theta, double alpha, double grading_exponent) {
  if (n_r < 16 || n_theta < 16) fail(ErrorCode::InvalidParameter, "grid needs n_r, n_theta >= 16");
  if (n_theta % 2 != 0) fail(ErrorCode::InvalidParameter, "n_theta must be even");
  if (!(alpha > -1.0)) fail(ErrorCode::InvalidParameter, "alpha must exceed -1");
  if (!(grading_exponent >= 1.0)) fail(ErrorCode::InvalidParameter, "grading exponent must be >= 1");

  PolarGrid g;
  g.n_r = n_r;
  g.n_theta = n_theta;
  g.alpha = alpha;
  g.grading = grading_exponent;
  g.dtheta = kTwoPi / n_theta;
  g.faces.resize(static_cast<std::size_t>(n_r + 1));
  for (int i = 0; i <= n_r; ++i)
    g.faces[static_cast<std::size_t>(i)] = std::pow(static_cast<double>(i) / n_r, grading_exponent);
  g.faces.back() = 1.0;
  g.radii.resize(static_cast<std::size_t>(n_r));
  for (int i = 0; i < n_r; ++i) {
    const auto k = static_cast<std::size_t>(i);
    g.radii[k] = 0.5 * (g.faces[k] + g.faces[k + 1]);
  }
  g.volumes = g.moments_for(0.0);
  g.moments = g.moments_for(alpha);
  return g;
}

std::vector<double> PolarGrid::moments_for(double a) const {
  if (!(a > -1.0)) fail(ErrorCode::InvalidParameter, "alpha must exceed -1");
  const double e = 2.0 * a + 2.0;
  std::vector<double> m(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i)
    m[i] = (std::pow(faces[i + 1], e) - std::pow(faces[i], e)) / e;
  return m;
}

std::vector<double> PolarGrid::weights_for(double a) const {
  std::vector<double> w = moments_for(a);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] /= volumes[i];
  return w;
}

namespace {

double integrate_moments(const PolarGrid& grid, std::span<const double> values,
                         const std::vector<double>& moments) {
  if (values.size() != static_cast<std::size_t>(grid.size()))
    fail(ErrorCode::InvalidParameter, "node value count does not match the grid");
  double total = 0.0;
  for (int i = 0; i < grid.n_r; ++i) {
    double ring = 0.0;
    for (int j = 0; j < grid.n_theta; ++j) {
      const double v = values[static_cast<std::size_t>(grid.index(i, j))];
      if (!std::isfinite(v)) fail(ErrorCode::NonFiniteValue, "integrand is not finite");
      ring += v;
    }
    total += ring * moments[static_cast<std::size_t>(i)];
  }
  return total * grid.dtheta;
}

}  // namespace

double integrate(const PolarGrid& grid, std::span<const double> values, Weight weight) {
  return integrate_moments(grid, values, weight == Weight::Singular ? grid.moments : grid.volumes);
}

double integrate_with_alpha(const PolarGrid& grid, std::span<const double> values, double alpha) {
  return integrate_moments(grid, values, grid.moments_for(alpha));
}

}  // namespace confmass

#include "confmass/radial_oracle.hpp"

#include <cmath>

#include "confmass/error.hpp"
#include "confmass/geometry.hpp"

namespace confmass {

double RadialOracle::value(double r) const {
  return 2.0 * std::log((1.0 + b) / (1.0 + b * std::pow(r, 2.0 * (1.0 + alpha))));
}

double RadialOracle::derivative(double r) const {
  const double e = 2.0 * (1.0 + alpha);
  const double q = b * std::pow(r, e);
  return -2.0 * e * q / (r * (1.0 + q));
}

std::vector<double> RadialOracle::sample(const PolarGrid& grid) const {
  std::vector<double> v(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.n_r; ++i) {
    const double x = value(grid.radii[static_cast<std::size_t>(i)]);
    for (int j = 0; j < grid.n_theta; ++j) v[static_cast<std::size_t>(grid.index(i, j))] = x;
  }
  return v;
}

RadialOracle radial_oracle(double alpha, double b) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) fail(ErrorCode::InvalidParameter, "alpha must exceed -1");
  if (!(b > 0.0) || !std::isfinite(b)) fail(ErrorCode::InvalidParameter, "b must be positive");
  RadialOracle o;
  o.alpha = alpha;
  o.b = b;
  const double a1 = 1.0 + alpha;
  o.lambda = 8.0 * a1 * a1 * b / ((1.0 + b) * (1.0 + b));
  o.mass = 8.0 * kPi * a1 * b / (1.0 + b);
  o.sup_norm = 2.0 * std::log1p(b);
  return o;
}

double oracle_b_for_center(double s) { return std::expm1(0.5 * s); }

}  // namespace confmass

#pragma once

#include <vector>

#include "confmass/grid.hpp"

namespace confmass {

/// Closed-form radial Liouville family on the unit disk with K = 1:
/// v_b(r) = 2 log((1 + b) / (1 + b r^{2(1 + alpha)})).
struct RadialOracle {
  double alpha = 0.0;
  double b = 1.0;
  double lambda = 0.0;    ///< 8 (1 + alpha)^2 b / (1 + b)^2
  double mass = 0.0;      ///< 8 pi (1 + alpha) b / (1 + b)
  double sup_norm = 0.0;  ///< 2 log(1 + b)

  double value(double r) const;
  double derivative(double r) const;
  /// Profile sampled at the nodes of a polar grid.
  std::vector<double> sample(const PolarGrid& grid) const;
};

RadialOracle radial_oracle(double alpha, double b);

/// Parameter b whose profile has center value s: b = e^{s/2} - 1.
double oracle_b_for_center(double s);

}  // namespace confmass

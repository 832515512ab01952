#pragma once

#include <span>
#include <vector>

namespace confmass {

/// Cell-centred polar grid on the unit disk. Radial cells are
/// [faces[i], faces[i+1]] with faces[i] = (i / n_r)^grading; nodes sit at
/// cell midpoints so there is no node at the pole. Angles are equispaced.
struct PolarGrid {
  int n_r = 0;
  int n_theta = 0;
  double alpha = 0.0;
  double grading = 1.0;
  double dtheta = 0.0;
  std::vector<double> faces;    ///< n_r + 1 entries, faces[0] = 0, faces[n_r] = 1
  std::vector<double> radii;    ///< n_r cell centres
  std::vector<double> volumes;  ///< int_cell r dr
  std::vector<double> moments;  ///< int_cell r^{2 alpha + 1} dr

  int size() const noexcept { return n_r * n_theta; }
  int index(int i, int j) const noexcept { return i * n_theta + j; }
  double angle(int j) const noexcept { return j * dtheta; }

  /// Exact moments int_cell r^{2 a + 1} dr for an arbitrary exponent.
  std::vector<double> moments_for(double a) const;
  /// Cell averages of |y|^{2 a}: moments_for(a) / volumes.
  std::vector<double> weights_for(double a) const;
};

PolarGrid build_grid(int n_r, int n_theta, double alpha, double grading_exponent = 1.0);

enum class Weight { None, Singular };

/// sum_ij value_ij m_i dtheta with m_i the singular (grid alpha) or plain
/// (alpha = 0) radial moments.
double integrate(const PolarGrid& grid, std::span<const double> values, Weight weight);

/// Same quadrature with moments for an explicit exponent.
double integrate_with_alpha(const PolarGrid& grid, std::span<const double> values, double alpha);

}  // namespace confmass

#pragma once

#include <Eigen/Dense>
#include "json.hpp"
#include <vector>

#include "confmass/disk_solver.hpp"

namespace confmass {

/// Terms of the dilation identity
///   1/2 int (d_nu v)^2 = 2 int G + int grad_y G . y - int_{circle} G
/// evaluated on a converged disk solution.
struct PohozaevReport {
  double lhs = 0.0;
  double rhs_area = 0.0;
  double rhs_radial = 0.0;
  double rhs_boundary = 0.0;
  double residual = 0.0;           ///< |lhs - (rhs_area + rhs_radial - rhs_boundary)|
  double relative_residual = 0.0;  ///< residual / |lhs| (0 when both vanish)
  double mass = 0.0;
  double flux = 0.0;
  double rhs_integral = 0.0;  ///< int of the right-hand side, equal to -flux
  double holder_gap = 0.0;    ///< lhs - flux^2 / (4 pi)
};

struct ComponentTerms {
  double rhs_area = 0.0;
  double rhs_radial = 0.0;
  double rhs_boundary = 0.0;
};

struct SystemPohozaevReport {
  double lhs = 0.0;  ///< 1/2 sum a^{ij} int d_nu v_i d_nu v_j
  std::vector<ComponentTerms> components;
  double residual = 0.0;
  double relative_residual = 0.0;
  std::vector<double> masses;
  std::vector<double> fluxes;
  Eigen::MatrixXd inverse;  ///< a^{ij}
};

/// Mass: lambda int |y|^{2a} K e^v (Liouville, system component),
/// p int |y|^{2a} K v^{p+1} (Henon), int |y|^{2a} W F'(v) (general).
double mass(const DiskSolution& solution);

/// Integral of the right-hand side of the solved equation (equals -flux).
double rhs_integral(const DiskSolution& solution);

PohozaevReport pohozaev_report(const DiskSolution& solution);
SystemPohozaevReport system_pohozaev_report(const std::vector<DiskSolution>& solutions, const Eigen::MatrixXd& a);

nlohmann::json to_json(const PohozaevReport& report);
nlohmann::json to_json(const SystemPohozaevReport& report);

}  // namespace confmass

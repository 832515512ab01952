#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "confmass/potential.hpp"
#include "confmass/problem.hpp"
#include "json.hpp"

namespace confmass {

enum class Theorem { Liouville, Henon, System, General };

std::string_view to_string(Theorem t) noexcept;

/// Explicit upper bound rho0 on the mass together with the data it was
/// computed from. `satisfied` compares observed masses with rho0 exactly;
/// any discretization allowance belongs to the caller.
struct MassCertificate {
  Theorem theorem = Theorem::Liouville;
  nlohmann::json ingredients = nlohmann::json::object();
  double rho0 = 0.0;
  std::string derivation;
  std::vector<double> observed_masses;
  bool satisfied = true;
  double slack = 0.0;  ///< rho0 - max observed mass (rho0 when nothing observed)
  bool degenerate = false;

  void observe(double mass);
  void observe(std::span<const double> masses);
};

struct CertificateOptions {
  /// Multiplies the scanned ratio sup|grad K| / inf K (conservative mode).
  double inflation = 1.0;
};

MassCertificate liouville_certificate(double alpha, const PotentialField& k, const CertificateOptions& options = {});

/// c0 is the (empirical) uniform sup-norm bound for p >= p0.
MassCertificate henon_certificate(double alpha, const PotentialField& k, double c0, double p0,
                                  const CertificateOptions& options = {});

MassCertificate system_certificate(const Eigen::MatrixXd& a, std::span<const double> alphas,
                                   std::span<const PotentialField> ks, const CertificateOptions& options = {});

/// Sampled constants of the structural conditions on the total weight
/// |y|^{2 alpha} W(y) and on F.
struct ConditionConstants {
  double c_w = 0.0;          ///< max |grad W~| |y| / W~
  double c_alpha = 0.0;      ///< max W~ / |y|^{2 alpha}
  double c_f = 0.0;          ///< max F / (1 + F') on [0, u_max]
  double growth = 0.0;       ///< smallest sampled C with F' <= C e^{C u^2}
  double weight_integral = 0.0;
  double u_max = 0.0;
  int u_samples = 0;
  bool c_f_at_range_end = false;  ///< maximum attained at u_max: C_F grows with the range
};

ConditionConstants validate_general_conditions(const PotentialField& w, double alpha, const Nonlinearity& f,
                                               double u_max, int u_samples = 2001);

MassCertificate general_certificate(const ConditionConstants& constants);

/// Liouville/system ingredient 2(1 + alpha) + sup|grad K| / inf K.
double field_constant(double alpha, const PotentialField& k, double inflation = 1.0);

nlohmann::json to_json(const MassCertificate& certificate);

}  // namespace confmass

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "confmass/potential.hpp"

namespace confmass {

/// -Lap v = lambda |y|^{2 alpha} K(y) e^v on the disk, v = 0 on the circle.
struct LiouvilleProblem {
  double lambda = 1.0;
  double alpha = 0.0;
  PotentialField k = PotentialField::constant(1.0);
};

/// -Lap v = |y|^{2 alpha} K(y) v^p, v > 0.
struct HenonProblem {
  double p = 2.0;
  double alpha = 0.0;
  PotentialField k = PotentialField::constant(1.0);
};

/// -Lap v_i = sum_j a_ij lambda_j |y|^{2 alpha_j} K_j(y) e^{v_j}.
struct SystemProblem {
  Eigen::MatrixXd a;
  std::vector<double> lambda;
  std::vector<double> alpha;
  std::vector<PotentialField> k;

  int components() const noexcept { return static_cast<int>(lambda.size()); }
};

/// F with its first two derivatives. F'' may be left empty, in which case a
/// central difference of F' is used for the Jacobian.
struct Nonlinearity {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
};

/// -Lap v = |y|^{2 alpha} W(y) F'(v).
struct GeneralProblem {
  double alpha = 0.0;
  PotentialField w = PotentialField::constant(1.0);
  Nonlinearity nonlinearity;
};

using ProblemSpec = std::variant<LiouvilleProblem, HenonProblem, SystemProblem, GeneralProblem>;

std::string_view problem_name(const ProblemSpec& problem);

/// Checks parameter ranges (lambda >= 0, alpha > -1, p > 1, positive K,
/// matching system sizes); throws InvalidParameter otherwise.
void validate(const ProblemSpec& problem);

/// F'(u) = lambda u^{p-1} exp(u^p), F(u) = (lambda / p)(exp(u^p) - 1), for u >= 0
/// and extended by zero for u < 0.
Nonlinearity exp_power_nonlinearity(double lambda, double p);
/// F(u) = e^u - 1.
Nonlinearity exponential_nonlinearity();
/// F(u) = u.
Nonlinearity linear_nonlinearity();

}  // namespace confmass

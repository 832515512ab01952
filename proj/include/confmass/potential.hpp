#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "confmass/conformal.hpp"

namespace confmass {

enum class FieldSign { Positive, NonNegative };

/// Grid-scan estimates of inf f and sup |grad f| over the closed disk.
struct FieldExtrema {
  double inf_value = 0.0;
  Point inf_location;
  double sup_gradient = 0.0;
  Point sup_gradient_location;
  double scan_dr = 0.0;
  double scan_dtheta = 0.0;
  int refine_factor = 3;
};

struct PolarGradient {
  double d_r = 0.0;      ///< radial derivative
  double d_theta = 0.0;  ///< angular derivative (not divided by r)
};

/// Scalar field sampled on the closed unit disk at radii i / n_r
/// (i = 0..n_r, the origin row included) and angles 2 pi j / n_theta.
/// Evaluation is tensor-product cubic Lagrange in (r, theta), periodic in
/// theta and reflected through the origin, so every sample is reproduced
/// exactly and derivatives come from the same polynomial.
class PotentialField {
 public:
  PotentialField(int n_r, int n_theta, std::vector<double> samples, FieldSign sign);

  static PotentialField from_function(int n_r, int n_theta, FieldSign sign,
                                      const std::function<double(double r, double theta)>& f);
  static PotentialField constant(double value, int n_r = 16, int n_theta = 32);

  int n_r() const noexcept { return n_r_; }
  int n_theta() const noexcept { return n_theta_; }
  FieldSign sign() const noexcept { return sign_; }
  double radius(int i) const noexcept { return static_cast<double>(i) / n_r_; }
  double angle(int j) const noexcept { return kTwoPi * j / n_theta_; }
  double sample(int i, int j) const;
  const std::vector<double>& samples() const noexcept { return samples_; }

  double value(double r, double theta) const;
  PolarGradient gradient(double r, double theta) const;
  double gradient_norm(double r, double theta) const;

  const FieldExtrema& extrema() const noexcept { return extrema_; }
  double min_sample() const;

  /// int_D |y|^{2 alpha} f(y) dy by exact radial moments on a refined grid.
  double integral(double alpha) const;

  PotentialField scaled(double c) const;

 private:
  void evaluate(double r, double theta, double* value, double* d_r, double* d_theta) const;
  void scan_extrema();

  int n_r_;
  int n_theta_;
  FieldSign sign_;
  std::vector<double> samples_;
  FieldExtrema extrema_;
};

/// Analytic positive data K(x) on Omega, as named in experiment configs.
struct ConstantField {
  double value = 1.0;
};
struct AffineField {
  double c0 = 1.0;
  double cx = 0.0;
  double cy = 0.0;
};
/// 1 + amplitude * exp(-|x - center|^2 / (2 sigma^2)).
struct GaussianBumpField {
  Point center;
  double sigma = 0.25;
  double amplitude = 1.0;
};
using AnalyticField = std::variant<ConstantField, AffineField, GaussianBumpField>;

double evaluate(const AnalyticField& field, Point x);
std::string describe(const AnalyticField& field);

struct PotentialGridSpec {
  int n_r = 64;
  int n_theta = 128;
};

/// K~(y) = K(Phi^{-1}(y)) (|Phi^{-1}(y)| / |y|)^{2 alpha} |(Phi^{-1})'(y)|^2.
/// Circle samples come from the boundary correspondence, never from
/// near-boundary Cauchy evaluation.
PotentialField transform_potential(const ConformalMap& map, double alpha,
                                   const std::function<double(Point)>& k_on_domain,
                                   PotentialGridSpec grid = {});

/// W~(y) = W(Phi^{-1}(y)) |(Phi^{-1})'(y)|^2 for a nonnegative weight.
PotentialField transform_weight(const ConformalMap& map,
                                const std::function<double(Point)>& w_on_domain,
                                PotentialGridSpec grid = {});

/// Writes r, theta, value rows for every sample.
void write_potential_csv(const PotentialField& field, const std::string& path);

}  // namespace confmass

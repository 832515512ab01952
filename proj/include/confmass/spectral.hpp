#pragma once

#include <complex>
#include <span>
#include <vector>

namespace confmass {

using Complex = std::complex<double>;

/// d/dt of the trigonometric interpolant through samples at t_j = 2 pi j / n.
/// The Nyquist mode is dropped for even n.
std::vector<Complex> periodic_derivative(std::span<const Complex> samples);

/// Largest |c_k| over the upper half of the resolved spectrum relative to the
/// largest coefficient overall; a cheap resolution indicator.
double spectral_tail(std::span<const Complex> samples);

/// Real trigonometric interpolant on an equispaced periodic grid.
class TrigInterpolant {
 public:
  TrigInterpolant() = default;
  explicit TrigInterpolant(std::span<const double> samples);

  double value(double t) const;
  double derivative(double t) const;
  std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
  std::vector<double> b_;
};

}  // namespace confmass

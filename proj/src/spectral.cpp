#include "confmass/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/FFT>

namespace confmass {

namespace {

std::vector<Complex> forward_fft(std::span<const Complex> samples) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in(samples.begin(), samples.end());
  std::vector<Complex> out;
  fft.fwd(out, in);
  return out;
}

// Signed wavenumber of FFT bin k, with the Nyquist bin mapped to zero.
double wavenumber(std::size_t k, std::size_t n) {
  if (n % 2 == 0 && k == n / 2) return 0.0;
  return k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
}

}  // namespace

std::vector<Complex> periodic_derivative(std::span<const Complex> samples) {
  const std::size_t n = samples.size();
  std::vector<Complex> spec = forward_fft(samples);
  for (std::size_t k = 0; k < n; ++k) spec[k] *= Complex(0.0, wavenumber(k, n));
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.inv(out, spec);
  return out;
}

double spectral_tail(std::span<const Complex> samples) {
  const std::size_t n = samples.size();
  const std::vector<Complex> spec = forward_fft(samples);
  double peak = 0.0;
  double tail = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::abs(wavenumber(k, n));
    const double mag = std::abs(spec[k]);
    peak = std::max(peak, mag);
    if (w > static_cast<double>(n) / 4.0) tail = std::max(tail, mag);
  }
  return peak > 0.0 ? tail / peak : 0.0;
}

TrigInterpolant::TrigInterpolant(std::span<const double> samples) : n_(samples.size()) {
  std::vector<Complex> c(samples.begin(), samples.end());
  const std::vector<Complex> spec = forward_fft(c);
  const std::size_t half = n_ / 2;
  a_.assign(half + 1, 0.0);
  b_.assign(half + 1, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n_);
  a_[0] = spec[0].real() * inv_n;
  for (std::size_t k = 1; k <= half; ++k) {
    const bool nyquist = (n_ % 2 == 0 && k == half);
    const double scale = nyquist ? inv_n : 2.0 * inv_n;
    a_[k] = scale * spec[k].real();
    b_[k] = nyquist ? 0.0 : -scale * spec[k].imag();
  }
}

double TrigInterpolant::value(double t) const {
  double sum = a_.empty() ? 0.0 : a_[0];
  for (std::size_t k = 1; k < a_.size(); ++k) {
    const double kt = static_cast<double>(k) * t;
    sum += a_[k] * std::cos(kt) + b_[k] * std::sin(kt);
  }
  return sum;
}

double TrigInterpolant::derivative(double t) const {
  double sum = 0.0;
  const std::size_t last = (n_ % 2 == 0) ? a_.size() - 1 : a_.size();
  for (std::size_t k = 1; k < last; ++k) {
    const double kk = static_cast<double>(k);
    sum += kk * (-a_[k] * std::sin(kk * t) + b_[k] * std::cos(kk * t));
  }
  return sum;
}

}  // namespace confmass

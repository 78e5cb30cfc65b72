#pragma once

#include <complex>
#include <span>
#include <vector>

namespace resonate::spectral {

// In-place complex DFT (forward: e^{-i...}, unnormalized) and inverse
// (normalized by 1/N). Thin thread-safe wrappers over FFTW.
void fft(std::vector<std::complex<double>>& a);
void ifft(std::vector<std::complex<double>>& a);

// Trigonometric interpolant of a real periodic sample set:
//   f(x) = Re sum_j c_j e^{i m_j 2 pi x / period},  m_j in [-N/2, N/2).
// Coefficients are kept in FFT order.
class FourierSeries {
 public:
  FourierSeries() = default;
  static FourierSeries from_samples(std::span<const double> samples, double period);

  double eval(double x) const;
  FourierSeries derivative() const;

  double period() const { return period_; }
  int size() const { return static_cast<int>(coef_.size()); }
  // Largest |c_m| with |m| > cutoff (resolution check).
  double max_abs_above(int cutoff) const;
  double max_abs() const;

 private:
  double period_ = 1.0;
  std::vector<std::complex<double>> coef_;
};

}  // namespace resonate::spectral

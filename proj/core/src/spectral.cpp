#include "resonate/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "resonate/errors.hpp"

namespace resonate::spectral {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

void dft_inplace(std::vector<std::complex<double>>& a, int sign) {
  const int n = static_cast<int>(a.size());
  if (n == 0) return;
  auto* data = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_1d(n, data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
}

// FFT-order index -> signed mode number
int mode_of(int j, int n) { return j <= n / 2 ? j : j - n; }

}  // namespace

void fft(std::vector<std::complex<double>>& a) { dft_inplace(a, FFTW_FORWARD); }

void ifft(std::vector<std::complex<double>>& a) {
  dft_inplace(a, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(a.size());
  for (auto& z : a) z *= inv;
}

FourierSeries FourierSeries::from_samples(std::span<const double> samples, double period) {
  if (samples.empty()) throw DomainError("FourierSeries needs at least one sample");
  FourierSeries out;
  out.period_ = period;
  out.coef_.assign(samples.begin(), samples.end());
  fft(out.coef_);
  const double inv = 1.0 / static_cast<double>(out.coef_.size());
  for (auto& z : out.coef_) z *= inv;
  return out;
}

double FourierSeries::eval(double x) const {
  const int n = size();
  std::complex<double> acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const int m = mode_of(j, n);
    acc += coef_[static_cast<std::size_t>(j)] *
           std::polar(1.0, kTwoPi * m * x / period_);
  }
  return acc.real();
}

FourierSeries FourierSeries::derivative() const {
  FourierSeries out = *this;
  const int n = size();
  for (int j = 0; j < n; ++j) {
    const int m = mode_of(j, n);
    // the Nyquist mode of a real signal has no well-defined odd derivative
    const double w = (n % 2 == 0 && j == n / 2) ? 0.0 : kTwoPi * m / period_;
    out.coef_[static_cast<std::size_t>(j)] *= std::complex<double>(0.0, w);
  }
  return out;
}

double FourierSeries::max_abs_above(int cutoff) const {
  const int n = size();
  double out = 0.0;
  for (int j = 0; j < n; ++j) {
    if (std::abs(mode_of(j, n)) > cutoff) {
      out = std::max(out, std::abs(coef_[static_cast<std::size_t>(j)]));
    }
  }
  return out;
}

double FourierSeries::max_abs() const {
  double out = 0.0;
  for (const auto& z : coef_) out = std::max(out, std::abs(z));
  return out;
}

}  // namespace resonate::spectral

#include "resonate/elliptic.hpp"

#include <algorithm>
#include <cmath>

#include "resonate/errors.hpp"

namespace resonate {

namespace {

constexpr double kAgmTol = 1e-15;
constexpr int kLandenDepth = 32;
constexpr double kPi = 3.141592653589793238462643383279502884;

void check_modulus(EllipticModulus k) {
  if (!(k.k >= 0.0) || k.k >= 1.0) {
    throw DomainError("elliptic modulus must satisfy 0 <= k < 1");
  }
}

void check_duffing_domain(double r, double theta) {
  if (!(theta > 0.0)) throw DomainError("theta must be positive");
  if (!(r > 0.0) || !(r < duffing_r_max(theta))) {
    throw DomainError("amplitude outside (0, (2 theta)^{-1/2})");
  }
}

}  // namespace

double duffing_r_max(double theta) { return 1.0 / std::sqrt(2.0 * theta); }

double duffing_potential(double x, double theta) {
  return 0.5 * x * x - 0.25 * theta * x * x * x * x;
}

double complete_elliptic_K(EllipticModulus k) {
  check_modulus(k);
  double a = 1.0;
  double b = std::sqrt((1.0 - k.k) * (1.0 + k.k));
  for (int i = 0; i < kLandenDepth && std::abs(a - b) >= kAgmTol; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return kPi / (2.0 * a);
}

JacobiTriple jacobi(double u, EllipticModulus k) {
  check_modulus(k);
  if (k.k < 1e-12) {
    // circular degeneration
    const double s = std::sin(u), c = std::cos(u);
    return {s, c, std::sqrt(1.0 - k.k * k.k * s * s)};
  }

  double a[kLandenDepth + 1], c[kLandenDepth + 1];
  a[0] = 1.0;
  c[0] = k.k;
  double b = std::sqrt((1.0 - k.k) * (1.0 + k.k));
  int n = 0;
  while (n < kLandenDepth && std::abs(c[n]) >= kAgmTol) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }

  // phi_n = 2^n a_n u, then descend with
  // sin(2 phi_{i-1} - phi_i) = (c_i / a_i) sin(phi_i).
  double phi = std::ldexp(a[n] * u, n);
  double phi1 = phi;  // phi at level 1, for dn
  for (int i = n; i >= 1; --i) {
    const double s = std::clamp(c[i] / a[i] * std::sin(phi), -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(s));
    if (i == 1) break;
    phi1 = phi;
  }
  const double phi0 = phi;
  if (n == 0) phi1 = phi0;

  JacobiTriple out;
  out.sn = std::sin(phi0);
  out.cn = std::cos(phi0);
  out.dn = (n == 0) ? 1.0 : out.cn / std::cos(phi1 - phi0);
  return out;
}

EllipticModulus duffing_modulus_bisect(double r, double theta) {
  check_duffing_domain(r, theta);
  const double target = 0.5 * theta * r * r;  // (k + 1/k)^{-2}
  // g(k) = (k + 1/k)^{-2} increases from 0 to 1/4 on (0,1).
  auto g = [](double k) {
    const double s = k + 1.0 / k;
    return 1.0 / (s * s);
  };
  double lo = 1e-300, hi = 1.0 - 1e-16;
  for (int i = 0; i < 2000 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < target ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi)};
}

EllipticModulus duffing_modulus(double r, double theta) {
  check_duffing_domain(r, theta);
  const double x = 2.0 * theta * r * r;  // in (0, 1)
  if (1.0 - x < 1e-10) return duffing_modulus_bisect(r, theta);
  const double s = std::sqrt(1.0 - x);
  // k^2 = (1-s)/(1+s), written as x/(1+s)^2 to avoid cancellation at small x
  const double k2 = x / ((1.0 + s) * (1.0 + s));
  return {std::sqrt(k2)};
}

double duffing_omega(double r, double theta) {
  const EllipticModulus k = duffing_modulus(r, theta);
  const double K = complete_elliptic_K(k);
  return kPi / (2.0 * K * std::sqrt(k.k * k.k + 1.0));
}

OmegaJet duffing_omega_jet(double r, double theta) {
  check_duffing_domain(r, theta);
  const double rmax = duffing_r_max(theta);
  OmegaJet jet;
  jet.value = duffing_omega(r, theta);

  double h1 = 1e-6 * std::max(1.0, r);
  h1 = std::min({h1, 0.5 * (rmax - r), 0.5 * r});
  jet.d1 = (duffing_omega(r + h1, theta) - duffing_omega(r - h1, theta)) / (2.0 * h1);

  double h2 = 1e-4 * std::max(1.0, r);
  h2 = std::min({h2, 0.5 * (rmax - r), 0.5 * r});
  jet.d2 = (duffing_omega(r + h2, theta) - 2.0 * jet.value + duffing_omega(r - h2, theta)) /
           (h2 * h2);
  return jet;
}

ChartPoint duffing_angle_chart(double phi, double r, double theta) {
  check_duffing_domain(r, theta);
  auto xy = [theta](double phi_, double r_) {
    const EllipticModulus k = duffing_modulus(r_, theta);
    const double s = std::sqrt(k.k * k.k + 1.0);
    const double om = duffing_omega(r_, theta);
    const JacobiTriple j = jacobi(phi_ / (om * s), k);
    return std::pair<double, double>{r_ * s * j.sn, r_ * j.cn * j.dn};
  };
  ChartPoint p;
  const auto [x, y] = xy(phi, r);
  p.x = x;
  p.y = y;
  const double rmax = duffing_r_max(theta);
  double h = 1e-6 * std::max(1.0, r);
  h = std::min({h, 0.5 * (rmax - r), 0.5 * r});
  p.dxdr = (xy(phi, r + h).first - xy(phi, r - h).first) / (2.0 * h);
  return p;
}

}  // namespace resonate

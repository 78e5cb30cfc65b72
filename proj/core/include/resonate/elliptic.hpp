#pragma once

// Elliptic integrals and Jacobi elliptic functions for the softening-quartic
// action-angle chart:
//
//   x_hat(t, r) = r sqrt(k^2+1) sn(t / sqrt(k^2+1), k)
//   y_hat(t, r) = r cn(t / sqrt(k^2+1), k) dn(t / sqrt(k^2+1), k)
//   T(r) = 4 K(k) sqrt(k^2+1),   omega(r) = 2 pi / T(r)
//
// where k = k_r in (0,1) solves (k + 1/k)^{-2} = theta r^2 / 2 for the well
// U(x) = x^2/2 - theta x^4/4. Orbits exist for 0 < r < (2 theta)^{-1/2}.

namespace resonate {

struct EllipticModulus {
  double k = 0.0;  // 0 <= k < 1
};

struct JacobiTriple {
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
};

// Complete elliptic integral of the first kind via the arithmetic-geometric
// mean; iteration stops when successive means differ by < 1e-15.
double complete_elliptic_K(EllipticModulus k);

// (sn, cn, dn)(u, k) by the descending Landen/AGM recursion, depth capped at 32.
JacobiTriple jacobi(double u, EllipticModulus k);

// The unique k_r in (0,1) with (k_r + 1/k_r)^{-2} = theta r^2 / 2. Closed form
// with a bisection fallback when 1 - 2 theta r^2 < 1e-10.
EllipticModulus duffing_modulus(double r, double theta);

// Bisection-only route for k_r; kept as an independent cross-check.
EllipticModulus duffing_modulus_bisect(double r, double theta);

double duffing_omega(double r, double theta);

struct OmegaJet {
  double value = 0.0;
  double d1 = 0.0;  // central difference, h = 1e-6 max(1,r)
  double d2 = 0.0;  // central difference, h = 1e-4 max(1,r)
};
OmegaJet duffing_omega_jet(double r, double theta);

struct ChartPoint {
  double x = 0.0;     // X(phi, r)
  double y = 0.0;     // Y(phi, r)
  double dxdr = 0.0;  // central difference in r
};
ChartPoint duffing_angle_chart(double phi, double r, double theta);

// Upper amplitude bound of the chart domain, (2 theta)^{-1/2}.
double duffing_r_max(double theta);

// U(x) = x^2/2 - theta x^4/4.
double duffing_potential(double x, double theta);

}  // namespace resonate

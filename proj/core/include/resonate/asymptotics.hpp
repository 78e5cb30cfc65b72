#pragma once

#include <array>
#include <vector>

#include "resonate/averaging.hpp"
#include "resonate/resonance.hpp"

namespace resonate {

// Coefficients of the particular phase-locked solution of the truncated system,
//   rho_*(t) ~ sum_k t^{-(k+m-2)/(2q)} rho_k,
//   phi_*(t) ~ psi0 + sum_k t^{-k/(2q)} phi_k,
// obtained from the lower-triangular chain
//   [eta 0; lambda_n nu_n] (rho_k, phi_k) = (Fk, Gk).
struct AsymptoticSolution {
  int n = 1;
  int m = 2;
  int q = 2;
  double psi0 = 0.0;
  std::vector<std::array<double, 2>> coef;  // (rho_k, phi_k), k = 1..K
  bool partial = false;  // orders beyond the expansion were taken as zero

  // Mth partial sums (rho_{*,M}, phi_{*,M}); requires n+M+1 <= coef.size().
  std::array<double, 2> partial_sum(int M, double t) const;
  // exact time derivatives of the partial sums
  std::array<double, 2> partial_sum_dt(int M, double t) const;
  int terms(int M) const { return n + M + 1; }
};

AsymptoticSolution solve_coefficients(const AveragedExpansion& exp, const ResonanceData& res,
                                      int n, int m, double psi0, int k_max = 2);

// Least-squares slopes of log|Z_rho|, log|Z_phi| vs log t for the truncation
// residuals Z of the Mth partial sums, over points log-spaced in [t_lo, t_hi].
struct ResidualSlopes {
  double rho = 0.0;
  double phi = 0.0;
};
ResidualSlopes residual_slopes(const AsymptoticSolution& sol, const AveragedExpansion& exp, int M,
                               double t_lo = 1e3, double t_hi = 1e6, int points = 25);

}  // namespace resonate

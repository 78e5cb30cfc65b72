#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "resonate/averaging.hpp"
#include "resonate/resonance.hpp"

namespace resonate {

// Leading orders of the averaged expansion: n for the amplitude equation,
// m >= 2 for the phase equation (Omega_1 = eta rho is always present).
struct OrderDetection {
  std::optional<int> n;
  std::optional<int> m;
};

OrderDetection detect_orders(const AveragedExpansion& exp, double tol_zero = 1e-9);

struct EquilibriumPhase {
  double psi0 = 0.0;
  double nu_n = 0.0;      // d_psi Lambda_n at (0, psi0)
  double lambda_n = 0.0;  // d_rho Lambda_n at (0, psi0)
  bool degenerate = false;  // |nu_n| < 1e-8
};

// Roots of psi -> Lambda_n(0, psi) on [0, 2pi): 720-point scan + bisection.
std::vector<EquilibriumPhase> find_equilibrium_phases(const AveragedExpansion& exp, int n);

enum class Verdict {
  SaddleUnstable,
  StableLocking,
  UnstableLocking,
  StableLockingViaDh,
  UnstableLockingViaDh,
  NoLocking,
  Inconclusive,
};

const char* verdict_name(Verdict v);

struct RootClassification {
  EquilibriumPhase root;
  double omega_m = 0.0;  // d_psi Omega_m at (0, psi0); 0 when m is missing
  double d_nm = 0.0;
  std::optional<int> h;
  std::optional<double> d_h;
  Verdict verdict = Verdict::Inconclusive;
  std::string criterion;  // the condition licensing this verdict
};

struct RegimeClassification {
  std::optional<int> n, m, ell;
  std::vector<RootClassification> roots;
  bool no_locking = false;  // sign-definite Lambda_n, no equilibrium phases
  std::string summary;

  const RootClassification* stable_root() const;
  const RootClassification* stable_root_nearest(double psi) const;
};

RegimeClassification classify_regime(const AveragedExpansion& exp, const ResonanceData& res,
                                     const OrderDetection& orders,
                                     const std::vector<EquilibriumPhase>& roots,
                                     double tol_zero = 1e-9);

// Eigenvalues of the linearized limiting system,
//   mu_pm(t) = t^{-n/2q}/2 (lambda_n pm sqrt(4 nu_n eta t^{(n-1)/2q} + lambda_n^2)).
struct EigenPair {
  std::complex<double> plus, minus;
};
EigenPair limiting_eigenvalues(int n, int q, double eta, double nu_n, double lambda_n, double t);

// Quadratic form L1(u,v) = (|eta| u^2 + |nu1| v^2)/2 + chi1 u v with the
// cross coefficient chosen from (eta, nu1, lambda1); requires lambda1 != 0.
struct L1Diagnostic {
  double eta = 0.0, nu1 = 0.0, chi1 = 0.0;
  double l_minus = 0.0, l_plus = 0.0;  // positivity bounds on the unit scale
  double value(double u, double v) const;
};
L1Diagnostic lyapunov_L1(double eta, double nu1, double lambda1);

}  // namespace resonate

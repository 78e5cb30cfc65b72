#include "resonate/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include "resonate/errors.hpp"

namespace resonate {

namespace {

// Lambda_k / Omega_k with orders past the expansion treated as zero.
struct OrderView {
  const AveragedExpansion& exp;
  bool used_missing = false;

  const RhoPoly* lam(int k) {
    if (k <= exp.max_order()) return &exp.lambda(k);
    used_missing = true;
    return nullptr;
  }
  const RhoPoly* om(int k) {
    if (k <= exp.max_order()) return &exp.omega(k);
    used_missing = true;
    return nullptr;
  }
};

}  // namespace

AsymptoticSolution solve_coefficients(const AveragedExpansion& exp, const ResonanceData& res,
                                      int n, int m, double psi0, int k_max) {
  if (k_max < 1 || k_max > 2) {
    throw UnsupportedOrderError("coefficient chain is built for k_max in {1, 2}");
  }
  const double eta = res.eta;
  const double lambda_n = exp.lambda(n).d_rho(0.0, psi0);
  const double nu_n = exp.lambda(n).d_psi(0.0, psi0);
  if (std::abs(nu_n) < 1e-14) {
    throw DomainError("nu_n = 0: the coefficient chain is singular at this root");
  }

  AsymptoticSolution sol;
  sol.n = n;
  sol.m = m;
  sol.q = exp.q();
  sol.psi0 = psi0;

  OrderView view{exp, false};
  auto at0 = [&](const RhoPoly* p) { return p ? p->eval(0.0, psi0) : 0.0; };

  // k = 1
  const double F1 = -at0(view.om(m));
  const double G1 = -at0(view.lam(n + 1));
  const double rho1 = F1 / eta;
  const double phi1 = (G1 - lambda_n * rho1) / nu_n;
  sol.coef.push_back({rho1, phi1});

  if (k_max >= 2) {
    const RhoPoly* om_m = view.om(m);
    const RhoPoly* lam_n1 = view.lam(n + 1);
    const double F2 = -at0(view.om(m + 1)) -
                      (om_m ? rho1 * om_m->d_rho(0.0, psi0) + phi1 * om_m->d_psi(0.0, psi0) : 0.0);
    const RhoPoly& lam_n = exp.lambda(n);
    const double G2 =
        -at0(view.lam(n + 2)) -
        (lam_n1 ? rho1 * lam_n1->d_rho(0.0, psi0) + phi1 * lam_n1->d_psi(0.0, psi0) : 0.0) -
        0.5 * (rho1 * rho1 * lam_n.d2_rho(0.0, psi0) +
               2.0 * rho1 * phi1 * lam_n.d_rho_psi(0.0, psi0) +
               phi1 * phi1 * lam_n.d2_psi(0.0, psi0));
    const double rho2 = F2 / eta;
    const double phi2 = (G2 - lambda_n * rho2) / nu_n;
    sol.coef.push_back({rho2, phi2});
  }

  sol.partial = view.used_missing;
  return sol;
}

std::array<double, 2> AsymptoticSolution::partial_sum(int M, double t) const {
  const int K = terms(M);
  if (K > static_cast<int>(coef.size())) {
    throw std::invalid_argument("partial sum M exceeds the available coefficients");
  }
  double rho = 0.0, phi = psi0;
  for (int k = 1; k <= K; ++k) {
    const auto& c = coef[std::size_t(k - 1)];
    rho += c[0] * std::pow(t, -double(k + m - 2) / (2.0 * q));
    phi += c[1] * std::pow(t, -double(k) / (2.0 * q));
  }
  return {rho, phi};
}

std::array<double, 2> AsymptoticSolution::partial_sum_dt(int M, double t) const {
  const int K = terms(M);
  if (K > static_cast<int>(coef.size())) {
    throw std::invalid_argument("partial sum M exceeds the available coefficients");
  }
  double drho = 0.0, dphi = 0.0;
  for (int k = 1; k <= K; ++k) {
    const auto& c = coef[std::size_t(k - 1)];
    const double pr = double(k + m - 2) / (2.0 * q);
    const double pp = double(k) / (2.0 * q);
    drho += c[0] * (-pr) * std::pow(t, -pr - 1.0);
    dphi += c[1] * (-pp) * std::pow(t, -pp - 1.0);
  }
  return {drho, dphi};
}

ResidualSlopes residual_slopes(const AsymptoticSolution& sol, const AveragedExpansion& exp, int M,
                               double t_lo, double t_hi, int points) {
  std::vector<double> lt, lzr, lzp;
  for (int i = 0; i < points; ++i) {
    const double t = t_lo * std::pow(t_hi / t_lo, double(i) / (points - 1));
    const auto s = sol.partial_sum(M, t);
    const auto ds = sol.partial_sum_dt(M, t);
    const auto rhs = exp.truncated_rhs(s[0], s[1], t);
    const double zr = std::max(std::abs(ds[0] - rhs[0]), 1e-280);
    const double zp = std::max(std::abs(ds[1] - rhs[1]), 1e-280);
    lt.push_back(std::log(t));
    lzr.push_back(std::log(zr));
    lzp.push_back(std::log(zp));
  }
  auto slope = [&](const std::vector<double>& y) {
    const std::size_t n = lt.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sx += lt[i];
      sy += y[i];
      sxx += lt[i] * lt[i];
      sxy += lt[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  return {slope(lzr), slope(lzp)};
}

}  // namespace resonate

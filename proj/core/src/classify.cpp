#include "resonate/classify.hpp"

#include <algorithm>
#include <cmath>

#include "resonate/errors.hpp"

namespace resonate {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_dist(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

// divergence of the order-k field at the equilibrium
double divergence_at(const AveragedExpansion& exp, int k, double psi0) {
  return exp.lambda(k).d_rho(0.0, psi0) + exp.omega(k).d_psi(0.0, psi0);
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::SaddleUnstable:
      return "saddle-unstable";
    case Verdict::StableLocking:
      return "stable-locking";
    case Verdict::UnstableLocking:
      return "unstable-locking";
    case Verdict::StableLockingViaDh:
      return "stable-locking-dh";
    case Verdict::UnstableLockingViaDh:
      return "unstable-locking-dh";
    case Verdict::NoLocking:
      return "no-locking";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

OrderDetection detect_orders(const AveragedExpansion& exp, double tol_zero) {
  OrderDetection out;
  const int cap = std::min(exp.max_order(), 2 * exp.q());
  for (int k = 1; k <= cap; ++k) {
    if (exp.lambda(k).sup_abs() > tol_zero) {
      out.n = k;
      break;
    }
  }
  for (int k = 2; k <= cap; ++k) {
    if (exp.omega(k).sup_abs() > tol_zero) {
      out.m = k;
      break;
    }
  }
  return out;
}

std::vector<EquilibriumPhase> find_equilibrium_phases(const AveragedExpansion& exp, int n) {
  const RhoPoly& lam = exp.lambda(n);
  auto f = [&](double psi) { return lam.eval(0.0, psi); };

  constexpr int kScan = 720;
  std::vector<double> roots;
  double prev_psi = 0.0, prev_f = f(0.0);
  for (int i = 1; i <= kScan; ++i) {
    const double psi = kTwoPi * i / kScan;
    const double fi = f(psi);
    if (prev_f == 0.0) {
      roots.push_back(prev_psi);
    } else if (prev_f * fi < 0.0) {
      double lo = prev_psi, hi = psi, flo = prev_f;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (flo * fm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_psi = psi;
    prev_f = fi;
  }

  std::vector<EquilibriumPhase> out;
  for (double psi0 : roots) {
    if (psi0 >= kTwoPi - 1e-12) continue;
    bool dup = false;
    for (const auto& r : out) {
      if (wrap_dist(r.psi0, psi0) < 1e-9) dup = true;
    }
    if (dup) continue;
    EquilibriumPhase ep;
    ep.psi0 = psi0;
    ep.nu_n = lam.d_psi(0.0, psi0);
    ep.lambda_n = lam.d_rho(0.0, psi0);
    ep.degenerate = std::abs(ep.nu_n) < 1e-8;
    out.push_back(ep);
  }
  return out;
}

RegimeClassification classify_regime(const AveragedExpansion& exp, const ResonanceData& res,
                                     const OrderDetection& orders,
                                     const std::vector<EquilibriumPhase>& roots,
                                     double tol_zero) {
  RegimeClassification out;
  out.n = orders.n;
  out.m = orders.m;
  if (!orders.n) {
    out.summary = "all Lambda_k vanish up to the available order; nothing to classify";
    for (const auto& root : roots) {
      out.roots.push_back({root, 0.0, 0.0, {}, {}, Verdict::Inconclusive, "no leading order"});
    }
    return out;
  }
  const int n = *orders.n;
  const int q = exp.q();
  const double eta = res.eta;
  const int ell = orders.m ? std::min(n, *orders.m) : n;
  out.ell = ell;

  if (roots.empty()) {
    // sign-definite leading coefficient forces every solution out of any
    // bounded set; check |Lambda_n| over the test box
    double min_abs = std::numeric_limits<double>::infinity();
    for (int ir = 0; ir <= 8; ++ir) {
      const double rho = -1.0 + 0.25 * ir;
      for (int ip = 0; ip < 720; ++ip) {
        min_abs = std::min(min_abs, std::abs(exp.lambda(n).eval(rho, kTwoPi * ip / 720.0)));
      }
    }
    if (min_abs > tol_zero) {
      out.no_locking = true;
      out.summary = "no equilibrium phases; Lambda_n is sign-definite (escape regime)";
    } else {
      out.summary = "no sign-changing roots but Lambda_n is not sign-definite; inconclusive";
    }
    return out;
  }

  const int h_cap = std::min(exp.max_order(), 2 * q);
  for (const auto& root : roots) {
    RootClassification rc;
    rc.root = root;
    rc.omega_m = orders.m ? exp.omega(*orders.m).d_psi(0.0, root.psi0) : 0.0;
    if (orders.m) {
      const int m = *orders.m;
      if (n < m) {
        rc.d_nm = root.lambda_n;
      } else if (n == m) {
        rc.d_nm = root.lambda_n + rc.omega_m;
      } else {
        rc.d_nm = rc.omega_m;
      }
    } else {
      rc.d_nm = root.lambda_n;  // any admissible m exceeds the detected n
    }

    if (root.degenerate) {
      rc.verdict = Verdict::Inconclusive;
      rc.criterion = "nu_n numerically zero at this root";
    } else if (root.nu_n * eta > 0.0) {
      rc.verdict = Verdict::SaddleUnstable;
      rc.criterion = "saddle: nu_n * eta > 0";
    } else if (rc.d_nm < -tol_zero) {
      rc.verdict = Verdict::StableLocking;
      rc.criterion = "nu_n * eta < 0 and d_nm < 0 (contracting divergence)";
    } else if (rc.d_nm > tol_zero) {
      if (ell + n - 1 < 2 * q) {
        rc.verdict = Verdict::UnstableLocking;
        rc.criterion = "nu_n * eta < 0, d_nm > 0, ell+n-1 < 2q (expanding divergence)";
      } else {
        rc.verdict = Verdict::Inconclusive;
        rc.criterion = "d_nm > 0 but ell+n-1 >= 2q: no instability statement applies";
      }
    } else {
      // d_nm vanishes: look for the first non-vanishing divergence order
      bool lower_ok = true;
      for (int k = 1; k <= ell; ++k) {
        if (std::abs(divergence_at(exp, k, root.psi0)) > tol_zero) lower_ok = false;
      }
      std::optional<int> h;
      double dh = 0.0;
      if (lower_ok) {
        for (int k = ell + 1; k <= h_cap; ++k) {
          const double d = divergence_at(exp, k, root.psi0);
          if (std::abs(d) > tol_zero) {
            h = k;
            dh = d;
            break;
          }
        }
      }
      if (!lower_ok) {
        rc.verdict = Verdict::Inconclusive;
        rc.criterion = "divergence of an order below ell does not vanish at the root";
      } else if (!h) {
        rc.verdict = Verdict::Inconclusive;
        rc.criterion = "d_nm = 0 and every available divergence order vanishes";
      } else {
        rc.h = h;
        rc.d_h = dh;
        if (dh < 0.0) {
          rc.verdict = Verdict::StableLockingViaDh;
          rc.criterion = "nu_n * eta < 0, d_nm = 0, d_h < 0 (higher-order contraction)";
        } else if (*h + n - 1 < 2 * q) {
          rc.verdict = Verdict::UnstableLockingViaDh;
          rc.criterion = "nu_n * eta < 0, d_nm = 0, d_h > 0, h+n-1 < 2q";
        } else {
          rc.verdict = Verdict::Inconclusive;
          rc.criterion = "d_h > 0 but h+n-1 >= 2q: no instability statement applies";
        }
      }
    }
    out.roots.push_back(std::move(rc));
  }

  int stable = 0, unstable = 0;
  for (const auto& rc : out.roots) {
    if (rc.verdict == Verdict::StableLocking || rc.verdict == Verdict::StableLockingViaDh) ++stable;
    if (rc.verdict == Verdict::SaddleUnstable || rc.verdict == Verdict::UnstableLocking ||
        rc.verdict == Verdict::UnstableLockingViaDh) {
      ++unstable;
    }
  }
  out.summary = std::to_string(stable) + " stable / " + std::to_string(unstable) +
                " unstable root(s) of " + std::to_string(out.roots.size());
  return out;
}

const RootClassification* RegimeClassification::stable_root() const {
  for (const auto& rc : roots) {
    if (rc.verdict == Verdict::StableLocking || rc.verdict == Verdict::StableLockingViaDh) {
      return &rc;
    }
  }
  return nullptr;
}

const RootClassification* RegimeClassification::stable_root_nearest(double psi) const {
  const RootClassification* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& rc : roots) {
    if (rc.verdict != Verdict::StableLocking && rc.verdict != Verdict::StableLockingViaDh) continue;
    const double d = wrap_dist(rc.root.psi0, psi);
    if (d < best_d) {
      best_d = d;
      best = &rc;
    }
  }
  return best;
}

EigenPair limiting_eigenvalues(int n, int q, double eta, double nu_n, double lambda_n, double t) {
  const double pref = 0.5 * std::pow(t, -double(n) / (2.0 * q));
  const double disc = 4.0 * nu_n * eta * std::pow(t, double(n - 1) / (2.0 * q)) +
                      lambda_n * lambda_n;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    return {pref * (lambda_n + s), pref * (lambda_n - s)};
  }
  const double s = std::sqrt(-disc);
  return {pref * std::complex<double>(lambda_n, s), pref * std::complex<double>(lambda_n, -s)};
}

L1Diagnostic lyapunov_L1(double eta, double nu1, double lambda1) {
  if (lambda1 == 0.0) throw DomainError("L1 diagnostic needs lambda_1 != 0");
  L1Diagnostic d;
  d.eta = eta;
  d.nu1 = nu1;
  const double ae = std::abs(eta), an = std::abs(nu1), al = std::abs(lambda1);
  const double mag = 0.5 * std::min({ae, an, 2.0 * al * ae * an /
                                             (lambda1 * lambda1 + 2.0 * ae * an)});
  d.chi1 = (nu1 * lambda1 > 0.0 ? 1.0 : -1.0) * mag;
  d.l_minus = std::min(ae - mag, an - mag) / 4.0;
  d.l_plus = std::max(ae + mag, an + mag);
  return d;
}

double L1Diagnostic::value(double u, double v) const {
  return 0.5 * (std::abs(eta) * u * u + std::abs(nu1) * v * v) + chi1 * u * v;
}

}  // namespace resonate

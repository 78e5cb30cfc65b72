#include "resonate/resonance.hpp"

#include <cmath>
#include <numeric>

#include "resonate/errors.hpp"

namespace resonate {

ResonanceData find_resonant_amplitude(const OscillatorModel& model, const PhaseSchedule& sched,
                                      int kappa, int varkappa) {
  if (kappa < 1 || varkappa < 1) throw ConfigError("kappa and varkappa must be positive");
  if (std::gcd(kappa, varkappa) != 1) throw ConfigError("kappa and varkappa must be coprime");

  const double target = kappa * sched.s(0) / varkappa;
  auto residual = [&](double r) { return model.omega(r).value - target; };

  const int scan_points = 400;
  const double lo = 1e-3;
  const double hi = model.r_max - 1e-3;
  if (!(hi > lo)) throw ConfigError("model domain too small for the resonance scan");

  ResonanceData out;
  out.kappa = kappa;
  out.varkappa = varkappa;

  double prev_r = lo;
  double prev_f = residual(lo);
  for (int i = 1; i < scan_points; ++i) {
    const double r = lo + (hi - lo) * i / (scan_points - 1);
    const double f = residual(r);
    if (prev_f == 0.0) {
      out.all_roots.push_back(prev_r);
    } else if (prev_f * f < 0.0) {
      double a = prev_r, b = r, fa = prev_f;
      while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        const double fm = residual(mid);
        if (fa * fm <= 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      out.all_roots.push_back(0.5 * (a + b));
    }
    prev_r = r;
    prev_f = f;
  }
  if (prev_f == 0.0) out.all_roots.push_back(prev_r);

  if (out.all_roots.empty()) {
    throw NoResonanceError("omega(r) never meets kappa*s0/varkappa on the scan interval");
  }

  out.a = out.all_roots.front();
  out.eta = model.omega(out.a).d1;
  if (std::abs(out.eta) < 1e-8) {
    throw DegenerateResonanceError("omega'(a) is numerically zero at the resonant amplitude");
  }
  return out;
}

}  // namespace resonate

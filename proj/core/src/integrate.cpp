#include "resonate/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "resonate/errors.hpp"

namespace resonate {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

using Vec = std::array<double, 2>;

Vec add(Vec a, const Vec& b) {
  a[0] += b[0];
  a[1] += b[1];
  return a;
}

Vec scale(Vec a, double c) {
  a[0] *= c;
  a[1] *= c;
  return a;
}

bool finite(const Vec& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }

double wrap_pi(double x) {
  x = std::fmod(x + kPi, kTwoPi);
  if (x <= 0.0) x += kTwoPi;
  return x - kPi;
}

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct DenseSegment {
  double t0 = 0.0, h = 0.0;
  Vec r1{}, r2{}, r3{}, r4{}, r5{};

  Vec eval(double t) const {
    const double th = (t - t0) / h;
    const double th1 = 1.0 - th;
    Vec out;
    for (int i = 0; i < 2; ++i) {
      out[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
    }
    return out;
  }
};

std::vector<double> log_grid(double t0, double t1, int points) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out.push_back(t0 * std::pow(t1 / t0, double(i) / (points - 1)));
  }
  out.back() = t1;
  return out;
}

}  // namespace

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::EscapedTube:
      return "escaped-tube";
    case EventKind::LeftDomain:
      return "left-domain";
    case EventKind::Locked:
      return "locked";
  }
  return "?";
}

bool Trajectory::has_event(EventKind k) const {
  for (const auto& e : events) {
    if (e.kind == k) return true;
  }
  return false;
}

std::optional<double> Trajectory::event_time(EventKind k) const {
  for (const auto& e : events) {
    if (e.kind == k) return e.t;
  }
  return std::nullopt;
}

Trajectory integrate_ode(const Rhs2& rhs, std::array<double, 2> y0, const IntegratorConfig& cfg,
                         const StopFn* stop, EventKind stop_kind) {
  if (!(cfg.t_end > cfg.t_start)) throw ConfigError("t_end must exceed t_start");
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0)) throw ConfigError("tolerances must be positive");

  Trajectory traj;
  const auto grid = log_grid(cfg.t_start, cfg.t_end, std::max(2, cfg.output_points));
  std::size_t next_out = 0;

  double t = cfg.t_start;
  Vec y = y0;

  auto push_sample = [&](double ts, const Vec& ys) {
    if (!traj.t.empty() && ts <= traj.t.back()) return;
    traj.t.push_back(ts);
    traj.state.push_back(ys);
  };
  push_sample(t, y);
  while (next_out < grid.size() && grid[next_out] <= t) ++next_out;

  double g_prev = 0.0;
  if (stop) {
    g_prev = (*stop)(t, y);
    if (g_prev <= 0.0) {
      traj.events.push_back({t, stop_kind});
      return traj;
    }
  }

  Vec k1 = rhs(t, y);

  // initial step size from the usual two-derivative heuristic
  auto err_norm = [&](const Vec& a, const Vec& ref0, const Vec& ref1) {
    double acc = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(ref0[i]), std::abs(ref1[i]));
      acc += (a[i] / sc) * (a[i] / sc);
    }
    return std::sqrt(0.5 * acc);
  };
  double h;
  {
    const double d0 = err_norm(y, y, y);
    const double d1 = err_norm(k1, y, y);
    double h0 = (d1 > 1e-10) ? 0.01 * d0 / d1 : 1e-6;
    h0 = std::min(h0, cfg.t_end - cfg.t_start);
    h0 = std::max(h0, 1e-8);
    const Vec y_e = add(y, scale(k1, h0));
    const Vec k_e = rhs(t + h0, y_e);
    const double d2 = err_norm({k_e[0] - k1[0], k_e[1] - k1[1]}, y, y) / h0;
    double h1 = (std::max(d1, d2) > 1e-15)
                    ? std::pow(0.01 / std::max(d1, d2), 0.2)
                    : std::max(1e-6, h0 * 1e-3);
    h = std::min({100.0 * h0, h1, cfg.max_step, cfg.t_end - cfg.t_start});
  }

  constexpr double beta = 0.04;
  constexpr double expo1 = 0.2 - beta * 0.75;
  constexpr double safety = 0.9;
  double facold = 1e-4;
  bool rejected = false;

  while (t < cfg.t_end) {
    h = std::min({h, cfg.max_step, cfg.t_end - t});
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw StiffnessError("step size underflow at t = " + std::to_string(t), t, y);
    }

    const Vec k2 = rhs(t + c2 * h, add(y, scale(k1, a21 * h)));
    const Vec k3 = rhs(t + c3 * h, add(y, add(scale(k1, a31 * h), scale(k2, a32 * h))));
    const Vec k4 = rhs(t + c4 * h,
                       add(y, add(scale(k1, a41 * h), add(scale(k2, a42 * h), scale(k3, a43 * h)))));
    const Vec k5 =
        rhs(t + c5 * h, add(y, add(scale(k1, a51 * h),
                                   add(scale(k2, a52 * h), add(scale(k3, a53 * h), scale(k4, a54 * h))))));
    const Vec k6 = rhs(
        t + h, add(y, add(scale(k1, a61 * h),
                          add(scale(k2, a62 * h),
                              add(scale(k3, a63 * h), add(scale(k4, a64 * h), scale(k5, a65 * h)))))));
    Vec y1;
    for (int i = 0; i < 2; ++i) {
      y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    const Vec k7 = rhs(t + h, y1);

    Vec errv;
    for (int i = 0; i < 2; ++i) {
      errv[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    double err = err_norm(errv, y, y1);
    if (!std::isfinite(err) || !finite(y1)) err = 10.0;  // force rejection

    const double fac11 = std::pow(std::max(err, 1e-16), expo1);
    if (err <= 1.0) {
      // accept
      facold = std::max(err, 1e-4);
      DenseSegment seg;
      seg.t0 = t;
      seg.h = h;
      for (int i = 0; i < 2; ++i) {
        const double dy = y1[i] - y[i];
        const double bspl = h * k1[i] - dy;
        seg.r1[i] = y[i];
        seg.r2[i] = dy;
        seg.r3[i] = bspl;
        seg.r4[i] = dy - h * k7[i] - bspl;
        seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                         d7 * k7[i]);
      }

      double t_stop = -1.0;
      if (stop) {
        const double g_new = (*stop)(t + h, y1);
        if (g_new <= 0.0) {
          double lo = t, hi = t + h;
          while (hi - lo > cfg.event_tol) {
            const double mid = 0.5 * (lo + hi);
            ((*stop)(mid, seg.eval(mid)) > 0.0 ? lo : hi) = mid;
          }
          t_stop = hi;
        }
        g_prev = g_new;
      }

      const double t_limit = t_stop >= 0.0 ? t_stop : t + h;
      while (next_out < grid.size() && grid[next_out] <= t_limit) {
        push_sample(grid[next_out], seg.eval(grid[next_out]));
        ++next_out;
      }
      if (t_stop >= 0.0) {
        push_sample(t_stop, seg.eval(t_stop));
        traj.events.push_back({t_stop, stop_kind});
        return traj;
      }

      t += h;
      y = y1;
      k1 = k7;  // FSAL
      double fac = fac11 / std::pow(facold, beta);
      fac = std::max(0.1, std::min(5.0, fac / safety));
      double hnew = h / fac;
      if (rejected) hnew = std::min(hnew, h);
      rejected = false;
      h = hnew;
    } else {
      rejected = true;
      h = h / std::min(10.0, fac11 / safety);
    }
  }

  if (traj.t.empty() || traj.t.back() < cfg.t_end) push_sample(cfg.t_end, y);
  return traj;
}

namespace {

void fill_polar_channels(Trajectory& traj, const PhaseSchedule& sched, int q,
                         const ResonanceData* res) {
  const std::size_t n = traj.t.size();
  traj.r.resize(n);
  traj.phi.resize(n);
  traj.theta.resize(n);
  traj.rho_chan.resize(n);
  traj.psi_chan.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = traj.t[i];
    const double r = traj.state[i][0];
    const double phi = traj.state[i][1];
    traj.r[i] = r;
    traj.phi[i] = phi;
    if (res) {
      const double ratio = double(res->kappa) / res->varkappa;
      const double theta = phi - ratio * sched.value(t);
      traj.theta[i] = theta;
      traj.psi_chan[i] = theta;
      traj.rho_chan[i] = std::pow(t, 1.0 / (2.0 * q)) * (r - res->a);
    } else {
      traj.theta[i] = phi;
      traj.psi_chan[i] = phi;
      traj.rho_chan[i] = r;
    }
  }
}

}  // namespace

Trajectory integrate_full(const OscillatorModel& model, const PhaseSchedule& sched,
                          const IntegratorConfig& cfg, const PolarState& initial,
                          const ResonanceData* res) {
  if (model.has_chart()) {
    PolarState start = initial;
    start.t = cfg.t_start;
    return integrate_full_cartesian(model, sched, cfg, model.chart_to_cartesian(start), res);
  }
  Rhs2 rhs = [&model, &sched](double t, const Vec& y) {
    return eval_rhs_polar(model, sched, PolarState{y[0], y[1], t});
  };
  const double margin = 1e-9;
  StopFn stop = [&model, margin](double, const Vec& y) {
    return std::min(y[0] - margin, model.r_max - margin - y[0]);
  };
  Trajectory traj = integrate_ode(rhs, {initial.r, initial.phi}, cfg, &stop, EventKind::LeftDomain);
  traj.kind = "full";
  fill_polar_channels(traj, sched, model.q, res);
  return traj;
}

Trajectory integrate_full_cartesian(const OscillatorModel& model, const PhaseSchedule& sched,
                                    const IntegratorConfig& cfg, const CartesianState& initial,
                                    const ResonanceData* res) {
  if (!model.has_chart()) throw ConfigError("model has no Cartesian chart");
  Rhs2 rhs = [&model, &sched](double t, const Vec& y) {
    return model.cartesian_rhs(sched, CartesianState{y[0], y[1], t});
  };
  const double theta_p = model.params.count("theta") ? model.params.at("theta") : 0.25;
  StopFn stop = [&model, theta_p](double, const Vec& y) {
    const double r2 = 2.0 * duffing_potential(y[0], theta_p) + y[1] * y[1];
    return model.r_max - 1e-9 - std::sqrt(std::max(r2, 0.0));
  };
  Trajectory traj =
      integrate_ode(rhs, {initial.x, initial.y}, cfg, &stop, EventKind::LeftDomain);
  traj.kind = "cartesian";

  const std::size_t n = traj.t.size();
  traj.r.resize(n);
  traj.phi.resize(n);
  traj.theta.resize(n);
  traj.rho_chan.resize(n);
  traj.psi_chan.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = traj.t[i];
    const double x = traj.state[i][0];
    const double yv = traj.state[i][1];
    const double r2 = 2.0 * duffing_potential(x, theta_p) + yv * yv;
    const double r = std::sqrt(std::max(r2, 0.0));
    traj.r[i] = r;
    double phi = 0.0;
    if (r > 1e-9 && r < model.r_max) {
      phi = model.chart_to_polar(CartesianState{x, yv, t}).phi;
    }
    traj.phi[i] = phi;
    if (res) {
      const double ratio = double(res->kappa) / res->varkappa;
      const double theta = wrap_pi(phi - ratio * sched.value(t));
      traj.theta[i] = theta;
      traj.psi_chan[i] = theta;
      traj.rho_chan[i] = std::pow(t, 1.0 / (2.0 * model.q)) * (r - res->a);
    } else {
      traj.theta[i] = phi;
      traj.psi_chan[i] = phi;
      traj.rho_chan[i] = r;
    }
  }
  return traj;
}

Trajectory integrate_truncated(const AveragedExpansion& exp, const IntegratorConfig& cfg,
                               std::array<double, 2> initial, double rho_bound) {
  Rhs2 rhs = [&exp](double t, const Vec& y) { return exp.truncated_rhs(y[0], y[1], t); };
  StopFn stop = [rho_bound](double, const Vec& y) { return rho_bound - std::abs(y[0]); };
  const bool bounded = std::isfinite(rho_bound);
  Trajectory traj =
      integrate_ode(rhs, initial, cfg, bounded ? &stop : nullptr, EventKind::LeftDomain);
  traj.kind = "truncated";

  const std::size_t n = traj.t.size();
  traj.r.resize(n);
  traj.phi.resize(n);
  traj.theta.resize(n);
  traj.rho_chan.resize(n);
  traj.psi_chan.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = traj.t[i];
    traj.rho_chan[i] = traj.state[i][0];
    traj.psi_chan[i] = traj.state[i][1];
    traj.r[i] = exp.a() + std::pow(t, -1.0 / (2.0 * exp.q())) * traj.state[i][0];
    traj.phi[i] = traj.state[i][1];
    traj.theta[i] = traj.state[i][1];
  }
  return traj;
}

Trajectory integrate_limiting(const AveragedExpansion& exp, int n, double psi0,
                              const IntegratorConfig& cfg, std::array<double, 2> initial) {
  const double eta = exp.eta();
  const double q2 = 2.0 * exp.q();
  Rhs2 rhs = [&exp, n, psi0, eta, q2](double t, const Vec& y) {
    return Vec{std::pow(t, -double(n) / q2) * exp.lambda(n).eval(y[0], psi0 + y[1]),
               std::pow(t, -1.0 / q2) * eta * y[0]};
  };
  Trajectory traj = integrate_ode(rhs, initial, cfg, nullptr, EventKind::LeftDomain);
  traj.kind = "limiting";

  const std::size_t count = traj.t.size();
  traj.r.resize(count);
  traj.phi.resize(count);
  traj.theta.resize(count);
  traj.rho_chan.resize(count);
  traj.psi_chan.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = traj.t[i];
    traj.rho_chan[i] = traj.state[i][0];
    traj.psi_chan[i] = psi0 + traj.state[i][1];
    traj.r[i] = exp.a() + std::pow(t, -1.0 / q2) * traj.state[i][0];
    traj.phi[i] = traj.psi_chan[i];
    traj.theta[i] = traj.psi_chan[i];
  }
  return traj;
}

LockReport detect_phase_locking(Trajectory& traj, const ResonanceData& res,
                                const PhaseSchedule& sched, int q, const AsymptoticSolution* sol,
                                double psi0, double eps_tube, double horizon) {
  (void)sched;
  LockReport report;
  const bool wrapped = traj.kind == "cartesian";
  const int M = sol ? static_cast<int>(sol->coef.size()) - sol->n - 1 : 0;

  double t_prev = 0.0, w_prev = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    const double t = traj.t[i];
    if (t > horizon) break;
    double rho_star = 0.0, phi_star = psi0;
    if (sol) {
      const auto s = sol->partial_sum(M, t);
      rho_star = s[0];
      phi_star = s[1];
    }
    const double dev_r =
        traj.r[i] - res.a - std::pow(t, -1.0 / (2.0 * q)) * rho_star;
    double dev_p = traj.psi_chan[i] - phi_star;
    if (wrapped) dev_p = wrap_pi(dev_p);
    const double w = std::abs(dev_r) + std::abs(dev_p);
    report.max_functional = std::max(report.max_functional, w);
    if (w >= eps_tube) {
      // localize the first crossing between the bracketing samples
      double t_e = t;
      if (!first && w != w_prev) {
        const double f = (eps_tube - w_prev) / (w - w_prev);
        t_e = t_prev + f * (t - t_prev);
      }
      report.locked = false;
      report.escape_time = t_e;
      traj.events.push_back({t_e, EventKind::EscapedTube});
      return report;
    }
    t_prev = t;
    w_prev = w;
    first = false;
  }

  if (!traj.t.empty() && traj.t.back() >= horizon) {
    report.locked = true;
    traj.events.push_back({horizon, EventKind::Locked});
  }
  return report;
}

}  // namespace resonate

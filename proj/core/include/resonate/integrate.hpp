#pragma once

#include <array>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "resonate/asymptotics.hpp"
#include "resonate/averaging.hpp"
#include "resonate/resonance.hpp"
#include "resonate/schedule.hpp"
#include "resonate/system.hpp"

namespace resonate {

struct IntegratorConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double max_step = std::numeric_limits<double>::infinity();
  double t_start = 1.0;
  double t_end = 1e4;
  int output_points = 2000;   // log-uniform output grid
  double event_tol = 1e-6;    // dense-output event localization in t
};

enum class EventKind { EscapedTube, LeftDomain, Locked };

const char* event_kind_name(EventKind k);

struct TrajectoryEvent {
  double t = 0.0;
  EventKind kind = EventKind::Locked;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<std::array<double, 2>> state;  // native variables of the run
  // derived channels (filled by the named integrators)
  std::vector<double> r, phi, theta, rho_chan, psi_chan;
  std::vector<TrajectoryEvent> events;
  std::string kind;  // full | cartesian | truncated | limiting | custom

  bool has_event(EventKind k) const;
  std::optional<double> event_time(EventKind k) const;
};

using Rhs2 = std::function<std::array<double, 2>(double t, const std::array<double, 2>&)>;
// Stop condition: integration halts at the first sign change of the returned
// value (positive inside, localized to cfg.event_tol).
using StopFn = std::function<double(double t, const std::array<double, 2>&)>;

// Adaptive embedded Runge-Kutta 5(4) pair with PI step control and quartic
// dense output. Throws StiffnessError on step underflow.
Trajectory integrate_ode(const Rhs2& rhs, std::array<double, 2> y0, const IntegratorConfig& cfg,
                         const StopFn* stop = nullptr, EventKind stop_kind = EventKind::LeftDomain);

// Full system (PS). For models with a Cartesian chart the integration runs in
// Cartesian variables and the polar channels are recovered through the chart.
Trajectory integrate_full(const OscillatorModel& model, const PhaseSchedule& sched,
                          const IntegratorConfig& cfg, const PolarState& initial,
                          const ResonanceData* res = nullptr);
Trajectory integrate_full_cartesian(const OscillatorModel& model, const PhaseSchedule& sched,
                                    const IntegratorConfig& cfg, const CartesianState& initial,
                                    const ResonanceData* res = nullptr);

// Truncated system: drho/dt = sum t^{-k/2q} Lambda_k, dpsi/dt = sum t^{-k/2q} Omega_k.
// Crossing |rho| = rho_bound is recorded as LeftDomain and stops the run.
Trajectory integrate_truncated(const AveragedExpansion& exp, const IntegratorConfig& cfg,
                               std::array<double, 2> initial,
                               double rho_bound = std::numeric_limits<double>::infinity());

// Limiting system around (0, psi0): du/dt = t^{-n/2q} Lambda_n(u, psi0+v),
// dv/dt = t^{-1/2q} eta u.
Trajectory integrate_limiting(const AveragedExpansion& exp, int n, double psi0,
                              const IntegratorConfig& cfg, std::array<double, 2> initial);

struct LockReport {
  bool locked = false;
  std::optional<double> escape_time;
  double max_functional = 0.0;  // sup of the tube functional over the window
};

// Tube functional |r - a - t^{-1/2q} rho_*| + |phi - kappa S/varkappa - phi_*|
// checked over [t_*, horizon]; Locked if it stays below eps_tube, otherwise
// EscapedTube at the first crossing. `sol` may be null (then rho_* = 0,
// phi_* = psi0). Appends the event to the trajectory.
LockReport detect_phase_locking(Trajectory& traj, const ResonanceData& res,
                                const PhaseSchedule& sched, int q, const AsymptoticSolution* sol,
                                double psi0, double eps_tube, double horizon);

}  // namespace resonate

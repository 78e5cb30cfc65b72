#pragma once

#include <vector>

#include "resonate/schedule.hpp"
#include "resonate/system.hpp"

namespace resonate {

// Amplitude a with omega(a) = kappa s0 / varkappa and eta = omega'(a) != 0.
struct ResonanceData {
  int kappa = 1;
  int varkappa = 1;
  double a = 0.0;
  double eta = 0.0;
  std::vector<double> all_roots;  // every bracketed root, ascending; a = front
};

// 400-point bracketing scan of omega(r) - kappa s0/varkappa on
// (1e-3, r_max - 1e-3), each bracket bisected to 1e-12. Throws
// NoResonanceError (no sign change) or DegenerateResonanceError (|eta| < 1e-8).
ResonanceData find_resonant_amplitude(const OscillatorModel& model, const PhaseSchedule& sched,
                                      int kappa, int varkappa);

}  // namespace resonate

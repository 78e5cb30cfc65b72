#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "resonate/elliptic.hpp"
#include "resonate/schedule.hpp"

namespace resonate {

struct PolarState {
  double r = 0.0;
  double phi = 0.0;
  double t = 1.0;
};

struct CartesianState {
  double x = 0.0;
  double y = 0.0;
  double t = 1.0;
};

// Perturbed planar oscillator
//   dr/dt   = sum_j t^{-j/q} f_j(r, phi, S(t)),
//   dphi/dt = omega(r) + sum_j t^{-j/q} g_j(r, phi, S(t)),
// with f_j, g_j 2pi-periodic in phi and in S. Models are immutable after
// construction; the callables must be pure.
struct PerturbationTerm {
  int order = 1;  // j in the t^{-j/q} ladder
  std::function<double(double r, double phi, double S)> f;
  std::function<double(double r, double phi, double S)> g;
};

struct OmegaJetFn {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

struct OscillatorModel {
  std::string label;
  int q = 2;
  double r_max = 1.0;
  std::function<OmegaJetFn(double r)> omega;
  std::vector<PerturbationTerm> terms;
  std::map<std::string, double> params;

  // Models with a non-circular action-angle chart (the quartic-well builtin)
  // also carry their Cartesian right-hand side and the chart both ways; the
  // integrator prefers the Cartesian form to avoid the r -> 0 singularity.
  std::function<std::array<double, 2>(const PhaseSchedule&, const CartesianState&)>
      cartesian_rhs;
  std::function<CartesianState(const PolarState&)> chart_to_cartesian;
  std::function<PolarState(const CartesianState&)> chart_to_polar;

  bool has_chart() const { return static_cast<bool>(cartesian_rhs); }
  bool contains(double r) const { return r > 0.0 && r < r_max; }
};

// Right-hand side of the polar system; callers check contains(r) and treat an
// exit as an event, not an error.
std::array<double, 2> eval_rhs_polar(const OscillatorModel& model, const PhaseSchedule& sched,
                                     const PolarState& state);

struct DuffingParams {
  double theta = 0.25;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double beta0 = 0.0;
  double beta1 = 0.0;
};

// dx/dt = y, dy/dt = -x + theta x^3 + t^{-1/2} (alpha(S) x + beta(S) y)
// with alpha(S) = alpha0 + alpha1 sin S, beta(S) = beta0 + beta1 sin S.
std::array<double, 2> eval_rhs_cartesian_duffing(const DuffingParams& p,
                                                 const PhaseSchedule& sched,
                                                 const CartesianState& state);

// Action-angle chart both ways: (r, phi) -> (X(phi,r), Y(phi,r)) and back via
// r = sqrt(2U(x)+y^2) plus a bracketed Newton solve for phi.
CartesianState from_polar_duffing(const PolarState& state, double theta);
PolarState to_polar_duffing(const CartesianState& state, double theta);

// Built-in models: "ex1", "ex2", "duffing". Unknown names raise ConfigError.
OscillatorModel builtin(const std::string& name, const std::map<std::string, double>& params);

}  // namespace resonate

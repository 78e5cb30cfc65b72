#include "resonate/system.hpp"

#include <cmath>

#include "resonate/errors.hpp"

namespace resonate {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

double param_or(const std::map<std::string, double>& params, const std::string& key,
                double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

std::array<double, 2> eval_rhs_polar(const OscillatorModel& model, const PhaseSchedule& sched,
                                     const PolarState& state) {
  const double S = sched.value(state.t);
  double dr = 0.0;
  double dphi = model.omega(state.r).value;
  for (const auto& term : model.terms) {
    const double scale = std::pow(state.t, -double(term.order) / model.q);
    dr += scale * term.f(state.r, state.phi, S);
    dphi += scale * term.g(state.r, state.phi, S);
  }
  return {dr, dphi};
}

std::array<double, 2> eval_rhs_cartesian_duffing(const DuffingParams& p,
                                                 const PhaseSchedule& sched,
                                                 const CartesianState& state) {
  const double S = sched.value(state.t);
  const double alpha = p.alpha0 + p.alpha1 * std::sin(S);
  const double beta = p.beta0 + p.beta1 * std::sin(S);
  const double z = alpha * state.x + beta * state.y;
  return {state.y,
          -state.x + p.theta * state.x * state.x * state.x + z / std::sqrt(state.t)};
}

CartesianState from_polar_duffing(const PolarState& state, double theta) {
  const ChartPoint c = duffing_angle_chart(state.phi, state.r, theta);
  return {c.x, c.y, state.t};
}

PolarState to_polar_duffing(const CartesianState& state, double theta) {
  const double r2 = 2.0 * duffing_potential(state.x, theta) + state.y * state.y;
  if (!(r2 > 0.0)) throw DomainError("point has no amplitude (energy level <= 0)");
  const double r = std::sqrt(r2);
  if (!(r < duffing_r_max(theta))) {
    throw DomainError("point lies outside the closed-orbit region of the well");
  }

  // quarter-period bracket from the signs of (x, y); X is monotone on each
  const double x = state.x, y = state.y;
  double lo, hi;
  if (y > 0.0 && x >= 0.0) {
    lo = 0.0;
    hi = 0.5 * kPi;
  } else if (x > 0.0 && y <= 0.0) {
    lo = 0.5 * kPi;
    hi = kPi;
  } else if (y < 0.0 && x <= 0.0) {
    lo = kPi;
    hi = 1.5 * kPi;
  } else {
    lo = 1.5 * kPi;
    hi = kTwoPi;
  }

  const double om = duffing_omega(r, theta);
  auto chart_x = [&](double phi) { return duffing_angle_chart(phi, r, theta); };

  ChartPoint pl = chart_x(lo), ph = chart_x(hi);
  double glo = pl.x - x, ghi = ph.x - x;
  if (glo == 0.0) return {r, lo, state.t};
  if (ghi == 0.0) return {r, hi, state.t};
  if (glo * ghi > 0.0) {
    // roundoff pushed x just past a turning point; take the closer endpoint
    return {r, std::abs(glo) < std::abs(ghi) ? lo : hi, state.t};
  }

  // safeguarded Newton: phi' of (X - x) is Y / omega
  double phi = 0.5 * (lo + hi);
  for (int i = 0; i < 50; ++i) {
    const ChartPoint c = chart_x(phi);
    const double g = c.x - x;
    if (std::abs(g) < 1e-12 || hi - lo < 1e-13) break;
    if (g * glo > 0.0) {
      lo = phi;
    } else {
      hi = phi;
    }
    double next = phi;
    if (std::abs(c.y) > 1e-8) next = phi - g * om / c.y;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    phi = next;
  }
  return {r, phi, state.t};
}

OscillatorModel builtin(const std::string& name, const std::map<std::string, double>& params) {
  OscillatorModel model;
  model.label = name;
  model.params = params;
  model.q = 2;

  const double theta = param_or(params, "theta", 0.25);
  if (!(theta > 0.0)) throw ConfigError("builtin models need theta > 0");

  if (name == "ex1") {
    const double beta0 = param_or(params, "beta0", 0.0);
    const double beta1 = param_or(params, "beta1", 0.0);
    const double mu0 = param_or(params, "mu0", 0.0);
    const double mu1 = param_or(params, "mu1", 0.0);
    model.r_max = 1.0 / std::sqrt(theta);
    model.omega = [theta](double r) {
      return OmegaJetFn{1.0 - theta * r * r, -2.0 * theta * r, -2.0 * theta};
    };
    PerturbationTerm t1;
    t1.order = 1;
    t1.f = [=](double r, double phi, double S) {
      const double beta = beta0 + beta1 * std::sin(S);
      const double mu = mu0 + mu1 * std::sin(S);
      const double sp = std::sin(phi);
      return beta * r * sp * sp - mu * sp;
    };
    t1.g = [=](double r, double phi, double S) {
      const double beta = beta0 + beta1 * std::sin(S);
      const double mu = mu0 + mu1 * std::sin(S);
      return beta * std::sin(phi) * std::cos(phi) - mu * std::cos(phi) / r;
    };
    model.terms.push_back(std::move(t1));
    return model;
  }

  if (name == "ex2") {
    const double alpha0 = param_or(params, "alpha0", 0.0);
    const double alpha1 = param_or(params, "alpha1", 0.0);
    const double beta0 = param_or(params, "beta0", 0.0);
    const double beta1 = param_or(params, "beta1", 0.0);
    model.r_max = 1.0 / std::sqrt(theta);
    model.omega = [theta](double r) {
      return OmegaJetFn{1.0 - theta * r * r, -2.0 * theta * r, -2.0 * theta};
    };
    PerturbationTerm t1;
    t1.order = 1;
    t1.f = [=](double r, double phi, double S) {
      const double alpha = alpha0 + alpha1 * std::sin(S);
      const double c = std::cos(phi);
      return -alpha * r * r * r * std::sin(phi) * c * c * c;
    };
    t1.g = [=](double r, double phi, double S) {
      const double alpha = alpha0 + alpha1 * std::sin(S);
      const double c = std::cos(phi);
      return -alpha * r * r * c * c * c * c;
    };
    PerturbationTerm t2;
    t2.order = 2;
    t2.f = [=](double r, double phi, double S) {
      const double beta = beta0 + beta1 * std::sin(S);
      const double sp = std::sin(phi);
      return beta * r * sp * sp;
    };
    t2.g = [=](double /*r*/, double phi, double S) {
      const double beta = beta0 + beta1 * std::sin(S);
      return 0.5 * beta * std::sin(2.0 * phi);
    };
    model.terms.push_back(std::move(t1));
    model.terms.push_back(std::move(t2));
    return model;
  }

  if (name == "duffing") {
    DuffingParams p;
    p.theta = theta;
    p.alpha0 = param_or(params, "alpha0", 0.0);
    p.alpha1 = param_or(params, "alpha1", 0.0);
    p.beta0 = param_or(params, "beta0", 0.0);
    p.beta1 = param_or(params, "beta1", 0.0);
    model.r_max = duffing_r_max(theta);
    model.omega = [theta](double r) {
      const OmegaJet j = duffing_omega_jet(r, theta);
      return OmegaJetFn{j.value, j.d1, j.d2};
    };
    PerturbationTerm t1;
    t1.order = 1;
    auto z_of = [p](double x, double y, double S) {
      const double alpha = p.alpha0 + p.alpha1 * std::sin(S);
      const double beta = p.beta0 + p.beta1 * std::sin(S);
      return alpha * x + beta * y;
    };
    t1.f = [theta, z_of](double r, double phi, double S) {
      const ChartPoint c = duffing_angle_chart(phi, r, theta);
      return c.y * z_of(c.x, c.y, S) / r;
    };
    t1.g = [theta, z_of](double r, double phi, double S) {
      const ChartPoint c = duffing_angle_chart(phi, r, theta);
      return -duffing_omega(r, theta) * c.dxdr * z_of(c.x, c.y, S) / r;
    };
    model.terms.push_back(std::move(t1));
    model.cartesian_rhs = [p](const PhaseSchedule& sched, const CartesianState& s) {
      return eval_rhs_cartesian_duffing(p, sched, s);
    };
    model.chart_to_cartesian = [theta](const PolarState& s) {
      return from_polar_duffing(s, theta);
    };
    model.chart_to_polar = [theta](const CartesianState& s) {
      return to_polar_duffing(s, theta);
    };
    return model;
  }

  throw ConfigError("unknown builtin system '" + name + "' (expected ex1, ex2 or duffing)");
}

}  // namespace resonate

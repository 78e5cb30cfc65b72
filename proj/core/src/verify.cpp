#include "resonate/verify.hpp"

#include <cmath>
#include <ostream>
#include <random>

#include "resonate/classify.hpp"
#include "resonate/elliptic.hpp"
#include "resonate/errors.hpp"
#include "resonate/integrate.hpp"
#include "resonate/scenario.hpp"
#include "resonate/util.hpp"

namespace resonate {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

CheckResult below(std::string name, double value, double bound, std::string note = "") {
  return {std::move(name), value < bound, value, bound, std::move(note)};
}

CheckResult at_least(std::string name, double value, double bound, std::string note = "") {
  return {std::move(name), value >= bound, value, bound, std::move(note)};
}

// ---- shared scenario builders -------------------------------------------

ScenarioConfig ex1_case1(double beta0, double mu1) {
  ScenarioConfig sc;
  sc.system_name = "ex1";
  sc.params = {{"theta", 0.25}, {"beta0", beta0}, {"beta1", 0.5}, {"mu0", -0.5}, {"mu1", mu1}};
  sc.q = 2;
  sc.s = {0.5, 1.0, 0.0};
  sc.kappa = 1;
  sc.varkappa = 1;
  return sc;
}

ScenarioConfig ex1_case2(double beta0, double beta1) {
  ScenarioConfig sc;
  sc.system_name = "ex1";
  sc.params = {{"theta", 0.25}, {"beta0", beta0}, {"beta1", beta1}, {"mu0", 0.0}, {"mu1", 0.25}};
  sc.q = 2;
  sc.s = {1.0, 0.25, 0.0};
  sc.kappa = 1;
  sc.varkappa = 2;
  return sc;
}

ScenarioConfig ex1_case3(double beta0) {
  ScenarioConfig sc;
  sc.system_name = "ex1";
  sc.params = {{"theta", 0.25}, {"beta0", beta0}, {"beta1", 0.5}, {"mu0", -0.5}, {"mu1", 1.0}};
  sc.q = 2;
  sc.s = {0.25, 1.0, 0.0};
  sc.kappa = 2;
  sc.varkappa = 1;
  return sc;
}

ScenarioConfig ex2_scenario(double beta0, double beta1) {
  ScenarioConfig sc;
  sc.system_name = "ex2";
  sc.params = {{"theta", 0.25}, {"alpha0", 0.1}, {"alpha1", 0.15}, {"beta0", beta0},
               {"beta1", beta1}};
  sc.q = 2;
  sc.s = {0.5, 1.0, 0.0};
  sc.kappa = 1;
  sc.varkappa = 2;
  sc.expansion_order = 4;
  return sc;
}

ScenarioConfig duffing_scenario(double beta0) {
  ScenarioConfig sc;
  sc.system_name = "duffing";
  sc.params = {{"theta", 0.25}, {"alpha0", 0.5}, {"alpha1", 0.6}, {"beta0", beta0},
               {"beta1", 0.0}};
  sc.q = 2;
  sc.s = {1.5, 0.0, 0.0};
  sc.kappa = 1;
  sc.varkappa = 2;
  return sc;
}

// ---- specialfn ------------------------------------------------------------

void suite_specialfn(std::vector<CheckResult>& out) {
  out.push_back(below("K(0) equals pi/2", std::abs(complete_elliptic_K({0.0}) - kPi / 2), 1e-12));

  double ident = 0.0;
  for (double k : {0.0, 0.3, 0.7, 0.95}) {
    for (int i = 0; i < 100; ++i) {
      const double u = -8.0 + 16.0 * i / 99.0;
      const JacobiTriple j = jacobi(u, {k});
      ident = std::max(ident, std::abs(j.sn * j.sn + j.cn * j.cn - 1.0));
      ident = std::max(ident, std::abs(j.dn * j.dn + k * k * j.sn * j.sn - 1.0));
    }
  }
  out.push_back(below("jacobi identities on the test grid", ident, 1e-10));

  double per = 0.0;
  for (double k : {0.3, 0.7, 0.95}) {
    const double K4 = 4.0 * complete_elliptic_K({k});
    for (double u : {-1.3, 0.4, 2.9}) {
      per = std::max(per, std::abs(jacobi(u + K4, {k}).sn - jacobi(u, {k}).sn));
    }
  }
  out.push_back(below("sn periodicity over 4K", per, 1e-9));

  {
    const double theta = 0.25, r = 0.9, phi = 1.1;
    const ChartPoint c = duffing_angle_chart(phi, r, theta);
    const double energy = duffing_potential(c.x, theta) + 0.5 * c.y * c.y - 0.5 * r * r;
    out.push_back(below("chart energy identity", std::abs(energy), 1e-8));
  }

  {
    double dev = 0.0;
    const double theta = 0.25, r = 0.8;
    for (double phi : {0.3, 1.7, 4.4}) {
      const ChartPoint a = duffing_angle_chart(phi, r, theta);
      const ChartPoint b = duffing_angle_chart(phi + kTwoPi, r, theta);
      dev = std::max({dev, std::abs(a.x - b.x), std::abs(a.y - b.y)});
    }
    out.push_back(below("chart 2pi-periodicity", dev, 1e-9));
  }

  {
    double worst = -1e300;
    const double theta = 0.25;
    const double rmax = duffing_r_max(theta);
    for (int i = 1; i <= 50; ++i) {
      const double r = rmax * i / 51.0;
      worst = std::max(worst, duffing_omega_jet(r, theta).d1);
    }
    out.push_back(below("omega strictly decreasing (max omega')", worst, 0.0));
  }

  {
    double dev = 0.0;
    const double theta = 0.25, r = 0.8, h = 1e-5;
    for (double phi : {0.2, 1.9, 3.6, 5.8}) {
      const double om = duffing_omega(r, theta);
      const ChartPoint c = duffing_angle_chart(phi, r, theta);
      const double dx = (duffing_angle_chart(phi + h, r, theta).x -
                         duffing_angle_chart(phi - h, r, theta).x) /
                        (2.0 * h);
      dev = std::max(dev, std::abs(om * dx - c.y));
    }
    out.push_back(below("angle derivative identity omega dX/dphi = Y", dev, 1e-6));
  }

  {
    const double theta = 0.25, r = 0.8, phi = 0.7, h = 1e-5;
    auto chart = [&](double p, double rr) { return duffing_angle_chart(p, rr, theta); };
    const double dxp = (chart(phi + h, r).x - chart(phi - h, r).x) / (2 * h);
    const double dyp = (chart(phi + h, r).y - chart(phi - h, r).y) / (2 * h);
    const double dxr = (chart(phi, r + h).x - chart(phi, r - h).x) / (2 * h);
    const double dyr = (chart(phi, r + h).y - chart(phi, r - h).y) / (2 * h);
    const double det = dxp * dyr - dyp * dxr;
    out.push_back(
        below("chart jacobian r/omega", std::abs(det - r / duffing_omega(r, theta)), 1e-5));
  }

  {
    double dev = 0.0;
    const double theta = 0.25;
    const double rmax = duffing_r_max(theta);
    for (int i = 1; i <= 30; ++i) {
      const double r = rmax * i / 31.0;
      dev = std::max(dev,
                     std::abs(duffing_modulus(r, theta).k - duffing_modulus_bisect(r, theta).k));
    }
    out.push_back(below("modulus closed form vs bisection", dev, 1e-10));
  }
}

// ---- averaging -------------------------------------------------------------

void suite_averaging(std::vector<CheckResult>& out) {
  const double theta = 0.25, beta0 = -0.5, beta1 = 0.5, mu0 = -0.5, mu1 = 1.0, s1 = 1.0;
  (void)mu0;
  const double sq2t = std::sqrt(2.0 * theta);

  ScenarioConfig sc = ex1_case1(beta0, mu1);
  AnalysisBundle b = analyze_scenario(sc);

  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
  for (int i = 0; i < 257; ++i) {
    const double psi = kTwoPi * i / 257.0;
    const double lam1 = 0.5 * (beta0 / sq2t - mu1 * std::cos(psi));
    d1 = std::max(d1, std::abs(b.exp.lambda(1).eval(0.0, psi) - lam1));
    for (double rho : {-1.0, 0.0, 1.0}) {
      d2 = std::max(d2, std::abs(b.exp.lambda(2).eval(rho, psi) - 0.5 * beta0 * rho));
      const double om2 = 0.5 * (-2.0 * theta * rho * rho - s1 + mu1 * sq2t * std::sin(psi));
      d3 = std::max(d3, std::abs(b.exp.omega(2).eval(rho, psi) - om2));
    }
  }
  out.push_back(below("ex1/1 Lambda_1 vs closed form", d1, 1e-7));
  out.push_back(below("ex1/1 Lambda_2 vs closed form", d2, 1e-7));
  out.push_back(below("ex1/1 Omega_2 vs closed form", d3, 1e-7));

  {
    ScenarioConfig sc2 = ex1_case2(0.1, beta1);
    AnalysisBundle b2 = analyze_scenario(sc2);
    double d = 0.0;
    for (int i = 0; i < 257; ++i) {
      const double psi = kTwoPi * i / 257.0;
      const double lam1 =
          (0.1 + 0.5 * beta1 * std::sin(2.0 * psi)) / std::sqrt(8.0 * theta);
      d = std::max(d, std::abs(b2.exp.lambda(1).eval(0.0, psi) - lam1));
    }
    out.push_back(below("ex1/2 Lambda_1 vs closed form", d, 1e-7));
  }

  {
    double v1 = 0.0;
    for (const auto& f : b.exp.v(1)) v1 = std::max(v1, f.max_abs());
    out.push_back(below("v_1 identically zero", v1, 1e-12));

    double mean = 0.0;
    for (int k = 1; k <= b.exp.transform_orders(); ++k) {
      for (const auto& f : b.exp.u(k)) {
        for (double m : f.s_mean_profile()) mean = std::max(mean, std::abs(m));
      }
    }
    out.push_back(below("u_k have zero S-mean", mean, 1e-10));
    out.push_back(below("Lambda_1 rho-degree", double(b.exp.lambda(1).degree()), 0.5));
  }

  {
    AveragedExpansion fine = compute_expansion(b.model, b.sched, b.res, 2, GridSpec{512, 512});
    double d = 0.0;
    for (int i = 0; i < 257; ++i) {
      const double psi = kTwoPi * i / 257.0;
      for (double rho : {-1.0, 0.0, 1.0}) {
        d = std::max(d, std::abs(fine.lambda(2).eval(rho, psi) - b.exp.lambda(2).eval(rho, psi)));
        d = std::max(d, std::abs(fine.omega(2).eval(rho, psi) - b.exp.omega(2).eval(rho, psi)));
      }
    }
    out.push_back(below("grid-doubling stability of order 2", d, 1e-8));
  }

  {
    // s0 dS u recovers the zero-mean right-hand side
    SpectralField rhs(64, 64, 2);
    for (int i = 0; i < 64; ++i) {
      for (int j = 0; j < 64; ++j) {
        rhs.at(i, j) = std::cos(rhs.s(j) / 2.0) * (1.0 + 0.3 * std::sin(rhs.psi(i)));
      }
    }
    const double s0 = 0.75;
    SpectralField u = solve_homological(rhs, s0);
    SpectralField back = u.s_derivative();
    back *= s0;
    back -= rhs;
    out.push_back(below("homological round trip", back.max_abs(), 1e-10));
  }
}

// ---- classify ---------------------------------------------------------------

void suite_classify(std::vector<CheckResult>& out) {
  {
    AnalysisBundle b = analyze_scenario(ex1_case1(-0.5, 1.0));
    const RootClassification* stable = b.regime.stable_root_nearest(3.0 * kPi / 4.0);
    bool ok = stable && stable->verdict == Verdict::StableLockingViaDh && stable->h &&
              *stable->h == 2;
    double dh_err = ok ? std::abs(*stable->d_h - (-0.5)) : 1.0;
    out.push_back(below("ex1/1 stable region verdict and d_h", ok ? dh_err : 1.0, 1e-9,
                        b.regime.summary));

    int saddles = 0;
    for (const auto& rc : b.regime.roots) {
      if (rc.verdict == Verdict::SaddleUnstable) ++saddles;
    }
    out.push_back(at_least("ex1/1 companion saddle root", saddles, 1.0));
  }
  {
    AnalysisBundle b = analyze_scenario(ex1_case1(0.25, 1.0));
    int unstable = 0;
    for (const auto& rc : b.regime.roots) {
      if (rc.verdict == Verdict::UnstableLockingViaDh) ++unstable;
    }
    out.push_back(at_least("ex1/1 unstable region verdict", unstable, 1.0));
  }
  {
    AnalysisBundle b = analyze_scenario(ex1_case1(-1.0, 1.0));
    out.push_back(at_least("ex1/1 escape region (|beta0/mu1| large)", b.regime.no_locking, 1.0));
    AnalysisBundle c = analyze_scenario(ex1_case1(0.3, 0.0));
    out.push_back(at_least("ex1/1 escape region (mu1 = 0)", c.regime.no_locking, 1.0));
  }
  {
    AnalysisBundle b = analyze_scenario(ex1_case3(0.3));
    out.push_back(at_least("ex1/3 escape region", b.regime.no_locking, 1.0));
  }
  {
    AnalysisBundle b = analyze_scenario(ex2_scenario(-0.5, 0.5));
    // k-even roots (psi0 = pi/4, 5pi/4): stable with d_h = (1+2b0-(-1)^k b1)/4
    double worst = 0.0;
    int stable = 0, saddle = 0;
    for (const auto& rc : b.regime.roots) {
      const int k = static_cast<int>(std::llround((rc.root.psi0 - kPi / 4.0) / (kPi / 2.0)));
      const double expected = (1.0 + 2.0 * (-0.5) + ((k % 2 == 0) ? -1.0 : 1.0) * 0.5) / 4.0;
      if (k % 2 == 0) {
        if (rc.verdict == Verdict::StableLockingViaDh && rc.h && *rc.h == 4) {
          ++stable;
          worst = std::max(worst, std::abs(*rc.d_h - expected));
        } else {
          worst = 1.0;
        }
      } else if (rc.verdict == Verdict::SaddleUnstable) {
        ++saddle;
      }
    }
    const bool shape_ok = stable == 2 && saddle == 2 && b.regime.roots.size() == 4;
    out.push_back(below("ex2 stable verdicts and d_h closed form", shape_ok ? worst : 1.0, 1e-9,
                        b.regime.summary));
  }
  {
    // flipping the oscillatory sign must remove every stable root
    AnalysisBundle b = analyze_scenario(ex2_scenario(-0.5, -0.5));
    out.push_back(below("ex2 unstable side has no stable root",
                        b.regime.stable_root() ? 1.0 : 0.0, 0.5, b.regime.summary));
  }
  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::uniform_int_distribution<int> Qn(1, 4);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const int q = Qn(rng);
      const int n = std::min(Qn(rng), 2 * q);
      double eta = U(rng), nu = U(rng), lam = U(rng);
      if (std::abs(eta) < 0.1) eta = 0.5;
      if (std::abs(nu) < 0.1) nu = -0.7;
      const double t = 1.0 + 99.0 * std::abs(U(rng));
      const EigenPair mu = limiting_eigenvalues(n, q, eta, nu, lam, t);
      const std::complex<double> sum = mu.plus + mu.minus;
      const std::complex<double> prod = mu.plus * mu.minus;
      const double sum_ref = lam * std::pow(t, -double(n) / (2 * q));
      const double prod_ref = -nu * eta * std::pow(t, -double(n + 1) / (2 * q));
      worst = std::max(worst, std::abs(sum - std::complex<double>(sum_ref)));
      worst = std::max(worst, std::abs(prod - std::complex<double>(prod_ref)));
    }
    out.push_back(below("limiting eigenvalue trace/determinant identities", worst, 1e-12));
  }
  {
    const double eta = -1.0, nu1 = 1.0, lam1 = -0.5;
    const L1Diagnostic L = lyapunov_L1(eta, nu1, lam1);
    double min_ratio = 1e300;
    for (int i = 0; i < 360; ++i) {
      const double u = std::cos(kTwoPi * i / 360.0), v = std::sin(kTwoPi * i / 360.0);
      min_ratio = std::min(min_ratio, L.value(u, v));
    }
    out.push_back(at_least("L1 positive definiteness on the unit circle", min_ratio - L.l_minus,
                           0.0));

    // decay along the linearized limiting flow when lambda_1 < 0
    const int q = 2;
    Rhs2 rhs = [&](double t, const std::array<double, 2>& z) {
      const double p = std::pow(t, -1.0 / (2.0 * q));
      return std::array<double, 2>{p * (lam1 * z[0] + nu1 * z[1]), p * eta * z[0]};
    };
    IntegratorConfig cfg;
    cfg.t_start = 1.0;
    cfg.t_end = 200.0;
    cfg.output_points = 400;
    Trajectory traj = integrate_ode(rhs, {0.035, 0.035}, cfg);
    double max_rise = -1e300;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
      if (traj.t[i] < 10.0) continue;
      const double val = L.value(traj.state[i][0], traj.state[i][1]);
      if (have_prev) max_rise = std::max(max_rise, val - prev);
      prev = val;
      have_prev = true;
    }
    out.push_back(below("L1 non-increasing along contracting flow", max_rise, 1e-12));
  }
}

// ---- asymptotics -------------------------------------------------------------

void suite_asymptotics(std::vector<CheckResult>& out) {
  AnalysisBundle b = analyze_scenario(ex1_case1(-0.5, 1.0));
  const RootClassification* stable = b.regime.stable_root_nearest(3.0 * kPi / 4.0);
  if (!stable) {
    out.push_back({"asymptotics setup (stable root exists)", false, 0, 1, b.regime.summary});
    return;
  }
  const std::size_t idx = static_cast<std::size_t>(stable - b.regime.roots.data());
  const AsymptoticSolution& sol = *b.root_analysis[idx].sol;

  {
    const double F1 = -b.exp.omega(2).eval(0.0, sol.psi0);
    out.push_back(below("rho_1 solves eta rho_1 = F_1",
                        std::abs(b.res.eta * sol.coef[0][0] - F1), 1e-12));
  }
  {
    const ResidualSlopes s = residual_slopes(sol, b.exp, 0);
    out.push_back(below("residual slope Z_rho", s.rho, -0.7 + 1e-12));
    out.push_back(below("residual slope Z_phi", s.phi, -0.7 + 1e-12));
  }
  {
    const auto v = sol.partial_sum(0, 1e4);
    out.push_back(below("partial sum rho_{*,0}(1e4) small", std::abs(v[0]), 0.05));
  }
  {
    // doubling t scales the k=1 rho-term by exactly 2^{-(m-1)/(2q)}
    AsymptoticSolution one = sol;
    one.coef.resize(1);
    one.coef[0][1] = 0.0;
    one.psi0 = 0.0;
    const double r1 = one.partial_sum(-1, 100.0)[0];
    const double r2 = one.partial_sum(-1, 200.0)[0];
    const double expected = std::pow(2.0, -double(1 + one.m - 2) / (2.0 * one.q));
    out.push_back(below("power-law scaling of the leading term",
                        std::abs(r2 / r1 - expected), 1e-12));
  }
}

// ---- integrate ----------------------------------------------------------------

void suite_integrate(std::vector<CheckResult>& out) {
  {
    // global error on u' = -u scales roughly linearly with the tolerance
    std::vector<double> ltol, lerr;
    for (double tol : {1e-6, 1e-7, 1e-8, 1e-9, 1e-10}) {
      IntegratorConfig cfg;
      cfg.rel_tol = tol;
      cfg.abs_tol = tol * 1e-3;
      cfg.t_start = 1.0;
      cfg.t_end = 10.0;
      cfg.output_points = 2;
      Rhs2 rhs = [](double, const std::array<double, 2>& y) {
        return std::array<double, 2>{-y[0], -y[1]};
      };
      Trajectory traj = integrate_ode(rhs, {1.0, 0.5}, cfg);
      const double exact = std::exp(-9.0);
      const double err = std::abs(traj.state.back()[0] - exact);
      ltol.push_back(std::log(tol));
      lerr.push_back(std::log(std::max(err, 1e-250)));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(ltol.size());
    for (std::size_t i = 0; i < ltol.size(); ++i) {
      sx += ltol[i];
      sy += lerr[i];
      sxx += ltol[i] * ltol[i];
      sxy += ltol[i] * lerr[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.push_back({"tolerance scaling exponent on u' = -u", slope > 0.5 && slope < 1.5, slope,
                   1.0, "expect ~1"});
  }
  {
    // unperturbed quartic well preserves the amplitude
    ScenarioConfig sc = duffing_scenario(0.0);
    sc.params["alpha0"] = 0.0;
    sc.params["alpha1"] = 0.0;
    OscillatorModel model = builtin("duffing", sc.params);
    PhaseSchedule sched = sc.schedule();
    IntegratorConfig cfg;
    cfg.t_start = 1.0;
    cfg.t_end = 1e3;
    cfg.output_points = 500;
    Trajectory traj = integrate_full_cartesian(model, sched, cfg, {1.0, 0.0, 1.0}, nullptr);
    double drift = 0.0;
    for (double r : traj.r) drift = std::max(drift, std::abs(r - traj.r.front()));
    out.push_back(below("unperturbed amplitude drift over [1,1e3]", drift, 1e-6));
  }
  {
    // full vs truncated: the slow amplitude channels stay within 0.1 at t=1e3
    AnalysisBundle b = analyze_scenario(ex1_case1(-0.5, 1.0));
    const RootClassification* stable = b.regime.stable_root_nearest(3.0 * kPi / 4.0);
    const double psi0 = stable->root.psi0;
    const double t0 = 10.0;
    const std::array<double, 2> z0{0.1, psi0 + 0.1};

    IntegratorConfig cfg;
    cfg.t_start = t0;
    cfg.t_end = 1e3;
    Trajectory trunc = integrate_truncated(b.exp, cfg, z0);

    PolarState start;
    start.t = t0;
    start.r = b.res.a + std::pow(t0, -0.25) * z0[0];
    start.phi = b.sched.value(t0) + z0[1];
    Trajectory full = integrate_full(b.model, b.sched, cfg, start, &b.res);

    const double dev = std::abs(full.rho_chan.back() - trunc.rho_chan.back());
    out.push_back(below("full vs truncated slow amplitude at t=1e3", dev, 0.1));
  }
  {
    out.push_back(check_truncated_escape());
  }
  {
    // halving the tolerances moves r(1e4) by less than 1e-6
    AnalysisBundle b = analyze_scenario(ex1_case1(-0.5, 1.0));
    const RootClassification* stable = b.regime.stable_root_nearest(3.0 * kPi / 4.0);
    PolarState start;
    start.t = 10.0;
    start.r = b.res.a;
    start.phi = b.sched.value(10.0) + stable->root.psi0;
    IntegratorConfig cfg;
    cfg.t_start = 10.0;
    cfg.t_end = 1e4;
    Trajectory a = integrate_full(b.model, b.sched, cfg, start, &b.res);
    cfg.rel_tol *= 0.5;
    cfg.abs_tol *= 0.5;
    Trajectory c = integrate_full(b.model, b.sched, cfg, start, &b.res);
    out.push_back(below("tolerance-halving invariance of r(1e4)",
                        std::abs(a.r.back() - c.r.back()), 1e-6));
  }
}

}  // namespace

// ---- figure-level corroboration checks ------------------------------------

CheckResult check_locking_figure() {
  ScenarioConfig sc = ex1_case1(-0.5, 1.0);
  sc.kind = "full";
  sc.t_star = 10.0;
  sc.delta = 0.05;
  sc.seeds = 10;
  sc.eps_tube = 0.3;
  sc.horizon = 1e4;
  sc.integrator.t_end = 1e4;
  sc.rng_seed = 12345;
  AnalysisBundle b = analyze_scenario(sc);
  SimulateOutcome o = simulate_batch(b, sc);

  const double a_ref = std::sqrt(2.0);
  const double th_ref = 3.0 * kPi / 4.0;
  int bad = 0;
  double worst_r = 0.0, worst_th = 0.0;
  for (const auto& run : o.runs) {
    const double dr = std::abs(run.r_end - a_ref);
    const double dth = std::abs(run.theta_end - th_ref);
    worst_r = std::max(worst_r, dr);
    worst_th = std::max(worst_th, dth);
    if (run.outcome != "locked" || dr >= 0.05 || dth >= 0.1) ++bad;
  }
  CheckResult cr;
  cr.name = "stable tube: 10 seeded runs lock onto (a, psi0)";
  cr.pass = bad == 0;
  cr.value = bad;
  cr.bound = 0.5;
  cr.note = "max |r(1e4)-sqrt2| = " + format_g(worst_r) +
            ", max |theta(1e4)-3pi/4| = " + format_g(worst_th);
  return cr;
}

CheckResult check_instability_figure() {
  ScenarioConfig sc = ex1_case1(0.25, 1.0);
  sc.kind = "full";
  sc.t_star = 10.0;
  sc.delta = 0.05;
  sc.seeds = 10;
  sc.eps_tube = 0.3;
  sc.horizon = 1e4;
  sc.integrator.t_end = 1e4;
  sc.rng_seed = 12345;
  AnalysisBundle b = analyze_scenario(sc);
  SimulateOutcome o = simulate_batch(b, sc);

  int escapes = 0;
  double last = 0.0;
  for (const auto& run : o.runs) {
    if ((run.outcome == "escaped-tube" || run.outcome == "left-domain") &&
        run.escape_time < 1e4) {
      ++escapes;
      last = std::max(last, run.escape_time);
    }
  }
  CheckResult cr;
  cr.name = "unstable tube: seeded runs escape before t = 1e4";
  cr.pass = escapes >= 9;
  cr.value = escapes;
  cr.bound = 9.0;
  cr.note = "latest escape at t = " + format_g(last);
  return cr;
}

CheckResult check_truncated_escape() {
  ScenarioConfig sc = ex1_case3(0.3);
  AnalysisBundle b = analyze_scenario(sc);
  IntegratorConfig cfg;
  cfg.t_start = 1.0;
  cfg.t_end = 1e5;
  Trajectory traj = integrate_truncated(b.exp, cfg, {0.0, 0.0}, 2.0);
  const auto t_exit = traj.event_time(EventKind::LeftDomain);
  CheckResult cr;
  cr.name = "sign-definite drift pushes |rho| past 2 before t = 1e5";
  cr.pass = t_exit.has_value() && *t_exit < 1e5;
  cr.value = t_exit ? *t_exit : 1e5;
  cr.bound = 1e5;
  return cr;
}

CheckResult check_duffing_figure() {
  ScenarioConfig sc = duffing_scenario(-0.2);
  sc.kind = "cartesian";
  sc.t_star = 10.0;
  sc.delta = 0.0;
  sc.seeds = 1;
  sc.eps_tube = 0.3;
  sc.horizon = 1e4;
  sc.integrator.t_end = 1e4;
  AnalysisBundle b = analyze_scenario(sc);

  CheckResult cr;
  cr.name = "quartic-well run settles at the resonant amplitude";
  if (!b.regime.stable_root()) {
    cr.pass = false;
    cr.note = "analyze found no stable root at beta0 = -0.2";
    return cr;
  }
  SimulateOutcome o = simulate_batch(b, sc);
  const double dev = std::abs(o.runs.front().r_end - b.res.a);
  cr.pass = dev < 0.05 && o.runs.front().outcome != "error";
  cr.value = dev;
  cr.bound = 0.05;
  cr.note = "a = " + format_g(b.res.a) + ", r(1e4) = " + format_g(o.runs.front().r_end);
  return cr;
}

std::vector<CheckResult> verify_suite(const std::string& suite) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (all || suite == "specialfn") suite_specialfn(out);
  if (all || suite == "averaging") suite_averaging(out);
  if (all || suite == "classify") suite_classify(out);
  if (all || suite == "asymptotics") suite_asymptotics(out);
  if (all || suite == "integrate") suite_integrate(out);
  if (all || suite == "figures") {
    out.push_back(check_locking_figure());
    out.push_back(check_instability_figure());
    out.push_back(check_truncated_escape());
    out.push_back(check_duffing_figure());
  }
  if (out.empty()) {
    throw ConfigError("unknown verify suite '" + suite +
                      "' (specialfn|averaging|classify|asymptotics|integrate|figures|all)");
  }
  return out;
}

int run_verify(const std::string& suite, std::ostream& out) {
  const auto results = verify_suite(suite);
  int failures = 0;
  for (const auto& r : results) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << "  [value " << format_g(r.value)
        << ", bound " << format_g(r.bound) << "]";
    if (!r.note.empty()) out << "  " << r.note;
    out << "\n";
    if (!r.pass) ++failures;
  }
  out << results.size() - failures << "/" << results.size() << " checks passed\n";
  return failures;
}

}  // namespace resonate

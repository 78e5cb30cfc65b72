#include "resonate/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include "resonate/errors.hpp"
#include "resonate/report.hpp"
#include "resonate/util.hpp"

namespace resonate {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559005768;

}  // namespace

ScenarioConfig ScenarioConfig::load(const Config& cfg) {
  ScenarioConfig sc;
  sc.system_name = cfg.str("system.name");
  sc.params = cfg.number_map("system.params");
  sc.q = cfg.integer("schedule.q");
  sc.s = cfg.numbers("schedule.s");
  sc.kappa = cfg.integer_or("resonance.kappa", 1);
  sc.varkappa = cfg.integer_or("resonance.varkappa", 1);
  sc.expansion_order = cfg.integer_or("expansion.order", 2);

  sc.integrator.rel_tol = cfg.number_or("integrator.rel_tol", 1e-9);
  sc.integrator.abs_tol = cfg.number_or("integrator.abs_tol", 1e-11);
  sc.integrator.t_start = cfg.number_or("integrator.t_start", 1.0);
  sc.integrator.t_end = cfg.number_or("integrator.t_end", 1e4);
  sc.integrator.output_points = cfg.integer_or("integrator.output_points", 2000);
  if (cfg.has("integrator.max_step")) sc.integrator.max_step = cfg.number("integrator.max_step");

  sc.kind = cfg.str_or("simulate.kind", "full");
  sc.t_star = cfg.number_or("simulate.t_star", 10.0);
  sc.delta = cfg.number_or("simulate.delta", 0.05);
  sc.seeds = cfg.integer_or("simulate.seeds", 10);
  sc.eps_tube = cfg.number_or("simulate.eps_tube", 0.3);
  sc.horizon = cfg.number_or("simulate.horizon", sc.integrator.t_end);
  if (cfg.has("simulate.rho_bound")) sc.rho_bound = cfg.number("simulate.rho_bound");
  if (cfg.has("simulate.initial")) sc.initial = cfg.numbers("simulate.initial");
  sc.out_dir = cfg.str_or("output.dir", "out");
  sc.rng_seed = static_cast<unsigned>(cfg.integer_or("simulate.seed", 1));
  return sc;
}

AnalysisBundle analyze_scenario(const ScenarioConfig& sc) {
  OscillatorModel model = builtin(sc.system_name, sc.params);
  PhaseSchedule sched = sc.schedule();
  ResonanceData res = find_resonant_amplitude(model, sched, sc.kappa, sc.varkappa);

  const int generic = std::min(sc.expansion_order, 2);
  AveragedExpansion exp = compute_expansion(model, sched, res, generic);
  for (const auto& cf : builtin_higher_orders(model, sched, res)) {
    if (cf.k <= sc.expansion_order) register_closed_form(exp, cf.k, cf.lambda, cf.omega);
  }

  OrderDetection orders = detect_orders(exp);
  std::vector<EquilibriumPhase> phases;
  if (orders.n) phases = find_equilibrium_phases(exp, *orders.n);
  RegimeClassification regime = classify_regime(exp, res, orders, phases);

  std::vector<RootAnalysis> root_analysis;
  for (const auto& rc : regime.roots) {
    RootAnalysis ra;
    if (orders.n && orders.m && !rc.root.degenerate) {
      ra.sol = solve_coefficients(exp, res, *orders.n, *orders.m, rc.root.psi0, 2);
      const int max_m = static_cast<int>(ra.sol->coef.size()) - ra.sol->n - 1;
      if (max_m >= 0) ra.slopes = residual_slopes(*ra.sol, exp, max_m);
    }
    root_analysis.push_back(std::move(ra));
  }

  return AnalysisBundle{sc,     std::move(model),  std::move(sched),
                        res,    std::move(exp),    orders,
                        phases, std::move(regime), std::move(root_analysis)};
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << "t,r,phi,theta,rho_chan,psi_chan,event\n";
  // annotate the first sample at or after each event time
  std::vector<std::string> notes(traj.t.size());
  for (const auto& e : traj.events) {
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
      if (traj.t[i] >= e.t || i + 1 == traj.t.size()) {
        if (!notes[i].empty()) notes[i] += "+";
        notes[i] += event_kind_name(e.kind);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    out << format_g(traj.t[i]) << ',' << format_g(traj.r[i]) << ',' << format_g(traj.phi[i])
        << ',' << format_g(traj.theta[i]) << ',' << format_g(traj.rho_chan[i]) << ','
        << format_g(traj.psi_chan[i]) << ',' << notes[i] << '\n';
  }
}

namespace {

void write_gnuplot_script(const std::string& dir, const AnalysisBundle& bundle, int runs,
                          double psi0) {
  std::ofstream gp(dir + "/plot.gp");
  gp << "# gnuplot script: amplitude and phase-shift channels\n";
  gp << "set terminal pngcairo size 1200,420\n";
  gp << "set output 'trajectories.png'\n";
  gp << "set multiplot layout 1,2\n";
  gp << "set logscale x\n";
  gp << "set xlabel 't'\n";
  gp << "set ylabel 'r'\n";
  gp << "a = " << format_g(bundle.res.a) << "\n";
  gp << "psi0 = " << format_g(psi0) << "\n";
  gp << "plot ";
  for (int i = 0; i < runs; ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "run_%02d.csv", i);
    gp << "'" << name << "' using 1:2 with lines notitle, ";
  }
  gp << "a with lines dashtype 2 lw 2 title 'r = a'\n";
  gp << "set ylabel 'theta'\n";
  gp << "plot ";
  for (int i = 0; i < runs; ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "run_%02d.csv", i);
    gp << "'" << name << "' using 1:4 with lines notitle, ";
  }
  gp << "psi0 with lines dashtype 2 lw 2 title 'theta = psi0'\n";
  gp << "unset multiplot\n";
}

}  // namespace

SimulateOutcome simulate_batch(const AnalysisBundle& bundle, const ScenarioConfig& sc,
                               std::vector<Trajectory>* trajectories) {
  // pick the classified root the batch is probing: the stable one nearest the
  // initial phase when present, else the first root
  const RootClassification* root = nullptr;
  const AsymptoticSolution* sol = nullptr;
  double psi0 = 0.0;
  if (!bundle.regime.roots.empty()) {
    root = bundle.regime.stable_root();
    if (!root) root = &bundle.regime.roots.front();
    psi0 = root->root.psi0;
    const std::size_t idx = static_cast<std::size_t>(root - bundle.regime.roots.data());
    if (bundle.root_analysis[idx].sol) sol = &*bundle.root_analysis[idx].sol;
  }

  const bool absolute = sc.initial.has_value();
  const int runs = absolute ? 1 : sc.seeds;
  if (!absolute && !root && sc.kind != "truncated") {
    throw ConfigError("tube-relative initial conditions need a classified root");
  }

  // tube-relative offsets drawn uniformly from the delta-ball
  std::mt19937_64 rng(sc.rng_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<std::array<double, 2>> offsets;
  for (int i = 0; i < runs; ++i) {
    double dr = 0.0, dp = 0.0;
    do {
      dr = unit(rng);
      dp = unit(rng);
    } while (dr * dr + dp * dp > 1.0);
    offsets.push_back({sc.delta * dr, sc.delta * dp});
  }

  SimulateOutcome outcome;
  outcome.runs.resize(static_cast<std::size_t>(runs));
  if (trajectories) trajectories->resize(static_cast<std::size_t>(runs));

  parallel_for(runs, [&](int i) {
    RunOutcome& ro = outcome.runs[static_cast<std::size_t>(i)];
    ro.index = i;
    char name[64];
    std::snprintf(name, sizeof(name), "run_%02d.csv", i);
    ro.file = name;
    try {
      IntegratorConfig icfg = sc.integrator;
      Trajectory traj;
      if (sc.kind == "truncated") {
        std::array<double, 2> init{0.0, psi0};
        if (absolute) {
          init = {(*sc.initial)[0], (*sc.initial)[1]};
        } else {
          const auto base = sol ? sol->partial_sum(
                                      static_cast<int>(sol->coef.size()) - sol->n - 1, sc.t_star)
                                : std::array<double, 2>{0.0, psi0};
          init = {base[0] + offsets[std::size_t(i)][0] * std::pow(sc.t_star, 1.0 / (2.0 * sc.q)),
                  base[1] + offsets[std::size_t(i)][1]};
          icfg.t_start = sc.t_star;
        }
        traj = integrate_truncated(bundle.exp, icfg, init, sc.rho_bound);
      } else if (sc.kind == "limiting") {
        if (!bundle.orders.n) throw ConfigError("limiting run needs a detected order n");
        std::array<double, 2> init = absolute
                                         ? std::array<double, 2>{(*sc.initial)[0], (*sc.initial)[1]}
                                         : offsets[std::size_t(i)];
        traj = integrate_limiting(bundle.exp, *bundle.orders.n, psi0, icfg, init);
      } else {
        PolarState start;
        if (absolute) {
          start = {(*sc.initial)[0], (*sc.initial)[1], icfg.t_start};
        } else {
          icfg.t_start = sc.t_star;
          const auto base = sol ? sol->partial_sum(
                                      static_cast<int>(sol->coef.size()) - sol->n - 1, sc.t_star)
                                : std::array<double, 2>{0.0, psi0};
          const double ratio = double(sc.kappa) / sc.varkappa;
          start.r = bundle.res.a + std::pow(sc.t_star, -1.0 / (2.0 * sc.q)) * base[0] +
                    offsets[std::size_t(i)][0];
          start.phi = ratio * bundle.sched.value(sc.t_star) + base[1] + offsets[std::size_t(i)][1];
          start.t = sc.t_star;
        }
        if (sc.kind == "cartesian") {
          if (!bundle.model.has_chart()) throw ConfigError("model has no Cartesian chart");
          traj = integrate_full_cartesian(bundle.model, bundle.sched, icfg,
                                          bundle.model.chart_to_cartesian(start), &bundle.res);
        } else {
          traj = integrate_full(bundle.model, bundle.sched, icfg, start, &bundle.res);
        }
      }

      if (sc.kind != "limiting" && root) {
        const LockReport lr = detect_phase_locking(traj, bundle.res, bundle.sched, sc.q, sol,
                                                   psi0, sc.eps_tube, sc.horizon);
        ro.outcome = lr.locked ? "locked" : (lr.escape_time ? "escaped-tube" : "open");
        if (lr.escape_time) ro.escape_time = *lr.escape_time;
      } else {
        ro.outcome = "open";
      }
      if (traj.has_event(EventKind::LeftDomain) && ro.outcome == "open") {
        ro.outcome = "left-domain";
        ro.escape_time = *traj.event_time(EventKind::LeftDomain);
      }
      if (!traj.r.empty()) {
        ro.r_end = traj.r.back();
        ro.theta_end = traj.theta.back();
      }
      if (trajectories) (*trajectories)[static_cast<std::size_t>(i)] = std::move(traj);
    } catch (const StiffnessError& e) {
      ro.outcome = "error";
      ro.error = e.what();
    } catch (const DomainError& e) {
      ro.outcome = "error";
      ro.error = e.what();
    }
  });

  for (const auto& ro : outcome.runs) {
    if (ro.outcome == "locked") ++outcome.locked;
    if (ro.outcome == "escaped-tube" || ro.outcome == "left-domain") ++outcome.escaped;
    if (ro.outcome == "error") ++outcome.errors;
  }
  return outcome;
}

SimulateOutcome run_simulate(const ScenarioConfig& sc, std::ostream& log) {
  AnalysisBundle bundle = analyze_scenario(sc);
  std::filesystem::create_directories(sc.out_dir);

  std::vector<Trajectory> trajectories;
  SimulateOutcome outcome = simulate_batch(bundle, sc, &trajectories);
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    if (outcome.runs[i].outcome == "error") continue;
    write_trajectory_csv(sc.out_dir + "/" + outcome.runs[i].file, trajectories[i]);
  }

  double psi0 = 0.0;
  const RootClassification* root =
      bundle.regime.stable_root() ? bundle.regime.stable_root()
                                  : (bundle.regime.roots.empty() ? nullptr
                                                                 : &bundle.regime.roots.front());
  if (root) psi0 = root->root.psi0;
  write_gnuplot_script(sc.out_dir, bundle, static_cast<int>(outcome.runs.size()), psi0);

  // batch summary cross-linked to the verdict it probes
  std::ofstream sum(sc.out_dir + "/summary.report");
  sum << "format = resonate-simulate-1\n";
  sum << "system = " << sc.system_name << "\n";
  sum << "kind = " << sc.kind << "\n";
  sum << "eps_tube = " << format_g(sc.eps_tube) << "\n";
  sum << "horizon = " << format_g(sc.horizon) << "\n";
  if (root) {
    sum << "probes.psi0 = " << format_g(psi0) << "\n";
    sum << "probes.verdict = " << verdict_name(root->verdict) << "\n";
    sum << "probes.criterion = " << root->criterion << "\n";
  }
  for (const auto& ro : outcome.runs) {
    const std::string p = "run." + std::to_string(ro.index);
    sum << p << ".file = " << ro.file << "\n";
    sum << p << ".outcome = " << ro.outcome << "\n";
    if (ro.escape_time > 0.0) sum << p << ".escape_time = " << format_g(ro.escape_time) << "\n";
    sum << p << ".r_end = " << format_g(ro.r_end) << "\n";
    sum << p << ".theta_end = " << format_g(ro.theta_end) << "\n";
    if (!ro.error.empty()) sum << p << ".error = " << ro.error << "\n";
  }

  log << "simulate: " << outcome.locked << " locked, " << outcome.escaped << " escaped, "
      << outcome.errors << " errors of " << outcome.runs.size() << " run(s); outputs in "
      << sc.out_dir << "\n";
  return outcome;
}

void run_average(const ScenarioConfig& sc, std::ostream& log) {
  AnalysisBundle bundle = analyze_scenario(sc);
  std::filesystem::create_directories(sc.out_dir);

  auto dump = [&](const std::string& path, bool lambda_side) {
    std::ofstream out(path);
    out << "psi,k,rho_degree,value\n";
    const int n_psi = bundle.exp.grid().n_psi;
    for (int k = 1; k <= bundle.exp.max_order(); ++k) {
      const RhoPoly& poly = lambda_side ? bundle.exp.lambda(k) : bundle.exp.omega(k);
      for (int d = 0; d <= poly.degree(); ++d) {
        for (int i = 0; i < n_psi; ++i) {
          const double psi = kTwoPi * i / n_psi;
          out << format_g(psi) << ',' << k << ',' << d << ','
              << format_g(poly.coefficient(d).eval(psi)) << '\n';
        }
      }
    }
  };
  dump(sc.out_dir + "/lambda.csv", true);
  dump(sc.out_dir + "/omega.csv", false);
  log << "average: wrote " << sc.out_dir << "/lambda.csv and " << sc.out_dir << "/omega.csv\n";
}

}  // namespace resonate

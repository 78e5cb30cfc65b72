#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resonate/asymptotics.hpp"
#include "resonate/averaging.hpp"
#include "resonate/classify.hpp"
#include "resonate/config.hpp"
#include "resonate/integrate.hpp"
#include "resonate/resonance.hpp"
#include "resonate/schedule.hpp"
#include "resonate/system.hpp"

namespace resonate {

struct ScenarioConfig {
  std::string system_name;
  std::map<std::string, double> params;
  int q = 2;
  std::vector<double> s;
  int kappa = 1;
  int varkappa = 1;
  int expansion_order = 2;  // generic engine caps at 2; builtins may add closed forms

  IntegratorConfig integrator;

  // simulate section
  std::string kind = "full";  // full | cartesian | truncated | limiting
  double t_star = 10.0;
  double delta = 0.05;
  int seeds = 10;
  double eps_tube = 0.3;
  double horizon = 1e4;
  double rho_bound = std::numeric_limits<double>::infinity();
  std::optional<std::vector<double>> initial;  // absolute initial state
  std::string out_dir = "out";
  unsigned rng_seed = 1;

  PhaseSchedule schedule() const { return PhaseSchedule(q, s); }
  static ScenarioConfig load(const Config& cfg);
};

struct RootAnalysis {
  std::optional<AsymptoticSolution> sol;
  std::optional<ResidualSlopes> slopes;
};

// Everything the analyze pipeline produces, reused by simulate and reports.
struct AnalysisBundle {
  ScenarioConfig scenario;
  OscillatorModel model;
  PhaseSchedule sched;
  ResonanceData res;
  AveragedExpansion exp;
  OrderDetection orders;
  std::vector<EquilibriumPhase> phases;
  RegimeClassification regime;
  std::vector<RootAnalysis> root_analysis;  // parallel to regime.roots
};

AnalysisBundle analyze_scenario(const ScenarioConfig& sc);

struct RunOutcome {
  int index = 0;
  std::string file;
  std::string outcome;  // locked | escaped-tube | left-domain | open | error
  double escape_time = 0.0;
  double r_end = 0.0;
  double theta_end = 0.0;
  std::string error;
};

struct SimulateOutcome {
  int locked = 0;
  int escaped = 0;
  int errors = 0;
  std::vector<RunOutcome> runs;
};

// Runs the configured batch in memory; scenario cells run concurrently
// (RESONATE_THREADS caps). Trajectories are returned through `trajectories`
// when non-null (indexed like the outcomes).
SimulateOutcome simulate_batch(const AnalysisBundle& bundle, const ScenarioConfig& sc,
                               std::vector<Trajectory>* trajectories = nullptr);

// simulate_batch plus run_*.csv, plot.gp and summary.report in sc.out_dir.
SimulateOutcome run_simulate(const ScenarioConfig& sc, std::ostream& log);

// Writes lambda.csv / omega.csv (columns psi,k,rho_degree,value) into out_dir.
void run_average(const ScenarioConfig& sc, std::ostream& log);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace resonate

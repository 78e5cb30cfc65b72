// resonate: locate resonant amplitudes of decaying-forcing oscillators,
// average the slow dynamics, classify the phase-locking regime, and verify
// the predictions by direct simulation.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "resonate/errors.hpp"
#include "resonate/report.hpp"
#include "resonate/scenario.hpp"
#include "resonate/verify.hpp"

namespace {

resonate::ScenarioConfig load_with_overrides(const std::string& config_path,
                                             const std::string& out_dir, double t_end,
                                             double eps_tube, int seed) {
  auto sc = resonate::ScenarioConfig::load(resonate::Config::parse_file(config_path));
  if (!out_dir.empty()) sc.out_dir = out_dir;
  if (t_end > 0.0) {
    sc.integrator.t_end = t_end;
    sc.horizon = std::min(sc.horizon, t_end);
  }
  if (eps_tube > 0.0) sc.eps_tube = eps_tube;
  if (seed >= 0) sc.rng_seed = static_cast<unsigned>(seed);
  return sc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resonant phase-locking laboratory for decaying perturbations"};
  app.require_subcommand(1);

  std::string config_path, out_dir, suite;
  double t_end = -1.0, eps_tube = -1.0;
  int seed = -1;
  bool with_asymptotics = false;

  auto* analyze = app.add_subcommand("analyze", "resonance, averaging, classification report");
  analyze->add_option("config", config_path, "scenario config file")->required();
  analyze->add_option("--out-dir", out_dir, "output directory");
  analyze->add_flag("--asymptotics", with_asymptotics,
                    "include coefficients and residual slopes in the text report");

  auto* average = app.add_subcommand("average", "emit Lambda_k/Omega_k as CSV");
  average->add_option("config", config_path, "scenario config file")->required();
  average->add_option("--out-dir", out_dir, "output directory");

  auto* simulate = app.add_subcommand("simulate", "run full/truncated/limiting trajectories");
  simulate->add_option("config", config_path, "scenario config file")->required();
  simulate->add_option("--out-dir", out_dir, "output directory");
  simulate->add_option("--t-end", t_end, "override integration end time");
  simulate->add_option("--eps-tube", eps_tube, "override the locking tube width");
  simulate->add_option("--seed", seed, "seed for initial-condition sampling");

  auto* verify = app.add_subcommand("verify", "run a named property suite");
  verify->add_option("suite", suite,
                     "specialfn|averaging|classify|asymptotics|integrate|figures|all")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      auto sc = load_with_overrides(config_path, out_dir, t_end, eps_tube, seed);
      const auto bundle = resonate::analyze_scenario(sc);
      std::cout << resonate::text_report(bundle, with_asymptotics);
      std::filesystem::create_directories(sc.out_dir);
      const std::string path = sc.out_dir + "/analysis.report";
      resonate::write_text_file(path, resonate::machine_report(bundle));
      std::cout << "machine-readable report: " << path << "\n";
    } else if (average->parsed()) {
      auto sc = load_with_overrides(config_path, out_dir, t_end, eps_tube, seed);
      resonate::run_average(sc, std::cout);
    } else if (simulate->parsed()) {
      auto sc = load_with_overrides(config_path, out_dir, t_end, eps_tube, seed);
      resonate::run_simulate(sc, std::cout);
    } else if (verify->parsed()) {
      return resonate::run_verify(suite, std::cout) == 0 ? 0 : 1;
    }
  } catch (const resonate::NoResonanceError& e) {
    std::cerr << "no resonance: " << e.what()
              << "\nhint: adjust resonance.kappa/varkappa or schedule.s[0] so that "
                 "kappa*s0/varkappa lies in the range of omega(r)\n";
    return 2;
  } catch (const resonate::DegenerateResonanceError& e) {
    std::cerr << "degenerate resonance: " << e.what()
              << "\nhint: omega'(a) vanishes there; pick a different resonance ratio\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

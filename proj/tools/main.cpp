// Experiment runner for the VI solver library.
//
//   visolve run --preset example2 --m 5 --seed 1 --algos tseng_inertial,segm
//   visolve run --config experiment.cfg --max-iters 200
//   visolve presets
//
// Flags override config-file values. Exit codes: 0 success, 2 usage error,
// 1 runtime failure.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "visolve/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark harness for pseudomonotone variational inequality solvers"};
  app.require_subcommand(1);

  CLI::App* presets_cmd = app.add_subcommand("presets", "List problem presets and algorithms");

  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment");
  std::string preset, algos, out_dir, config_path;
  std::uint64_t m = 0, seed = 0;
  int max_iters = 0;
  double stop_tol = -1.0;
  double phi = 0, gamma1 = 0, delta = -1, eps_scale = 0, phi_scale = 0, f_coeff = -1,
         fixed_gamma = 0, armijo_alpha = 0, armijo_ell = 0, armijo_phi = 0;

  run_cmd->add_option("--preset", preset, "Problem preset (see `presets`)");
  run_cmd->add_option("--m", m, "Dimension for example1/example2");
  run_cmd->add_option("--seed", seed, "RNG seed");
  run_cmd->add_option("--algos", algos, "Comma-separated algorithm list");
  run_cmd->add_option("--max-iters", max_iters, "Iteration cap");
  run_cmd->add_option("--stop-tol", stop_tol, "Stop when ||x_{n+1}-x_n|| <= tol");
  run_cmd->add_option("--out-dir", out_dir, "Output directory for CSV files");
  run_cmd->add_option("--config", config_path, "key=value config file");
  run_cmd->add_option("--phi", phi, "Adaptive step safety factor, in (0,1)");
  run_cmd->add_option("--gamma1", gamma1, "Initial step size");
  run_cmd->add_option("--delta", delta, "Inertia cap");
  run_cmd->add_option("--eps-scale", eps_scale, "eps_n = eps_scale/(n+1)^2");
  run_cmd->add_option("--phi-scale", phi_scale, "phi_n = phi_scale/(n+1)");
  run_cmd->add_option("--f-coeff", f_coeff, "Viscosity contraction coefficient, in [0,1)");
  run_cmd->add_option("--fixed-gamma", fixed_gamma, "Step for fixed-step baselines");
  run_cmd->add_option("--armijo-alpha", armijo_alpha, "Backtracking start step");
  run_cmd->add_option("--armijo-ell", armijo_ell, "Backtracking shrink factor");
  run_cmd->add_option("--armijo-phi", armijo_phi, "Backtracking acceptance factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (presets_cmd->parsed()) {
    std::cout << "presets:\n";
    for (visolve::Preset p : visolve::all_presets()) std::cout << "  " << to_string(p) << "\n";
    std::cout << "algorithms:\n";
    for (visolve::AlgorithmKind k : visolve::all_algorithms())
      std::cout << "  " << to_string(k) << "\n";
    return 0;
  }

  try {
    visolve::ConfigOverrides overrides;
    if (run_cmd->count("--config")) overrides = visolve::parse_overrides(read_file(config_path));

    // Flags win over config-file values.
    if (run_cmd->count("--preset")) overrides.preset = preset;
    if (run_cmd->count("--m")) overrides.m = static_cast<std::size_t>(m);
    if (run_cmd->count("--seed")) overrides.seed = seed;
    if (run_cmd->count("--algos")) {
      std::vector<std::string> names;
      std::istringstream in(algos);
      std::string item;
      while (std::getline(in, item, ','))
        if (!item.empty()) names.push_back(item);
      overrides.algorithms = names;
    }
    if (run_cmd->count("--max-iters")) overrides.max_iters = max_iters;
    if (run_cmd->count("--stop-tol")) overrides.stop_tol = stop_tol;
    if (run_cmd->count("--out-dir")) overrides.out_dir = out_dir;
    if (run_cmd->count("--phi")) overrides.phi = phi;
    if (run_cmd->count("--gamma1")) overrides.gamma1 = gamma1;
    if (run_cmd->count("--delta")) overrides.delta = delta;
    if (run_cmd->count("--eps-scale")) overrides.eps_scale = eps_scale;
    if (run_cmd->count("--phi-scale")) overrides.phi_scale = phi_scale;
    if (run_cmd->count("--f-coeff")) overrides.f_coeff = f_coeff;
    if (run_cmd->count("--fixed-gamma")) overrides.fixed_gamma = fixed_gamma;
    if (run_cmd->count("--armijo-alpha")) overrides.armijo_alpha = armijo_alpha;
    if (run_cmd->count("--armijo-ell")) overrides.armijo_ell = armijo_ell;
    if (run_cmd->count("--armijo-phi")) overrides.armijo_phi = armijo_phi;

    const visolve::ExperimentSpec spec = visolve::resolve_spec(overrides);
    visolve::run_experiment(spec);
    return 0;
  } catch (const visolve::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

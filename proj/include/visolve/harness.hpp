#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "visolve/optimal_control.hpp"
#include "visolve/problem.hpp"
#include "visolve/solver.hpp"

namespace visolve {

// Benchmark presets. Names are part of the CLI surface.
enum class Preset {
  Example1,   // radial argmin operator on Box[-5,5]^m
  Example2,   // random affine VI on Box[-2,5]^m, solution 0
  Example3,   // soft-sphere operator on the L2[0,1] unit ball, solution 0
  Control41,  // oscillator optimal control, N=100
  Control42,  // double integrator optimal control, N=100
};

std::string to_string(Preset preset);
std::optional<Preset> preset_from_string(const std::string& name);
const std::vector<Preset>& all_presets();

// Fully resolved experiment description: preset, instance parameters, the
// algorithms to run, and solver settings.
struct ExperimentSpec {
  Preset preset = Preset::Example2;
  std::size_t m = 5;        // dimension for example1/example2
  std::uint64_t seed = 1;
  std::vector<AlgorithmKind> algorithms{AlgorithmKind::TsengInertial};
  int max_iters = 1000;
  double stop_tol = 0.0;
  std::string out_dir = "out";

  double phi = 0.8;
  double gamma1 = 1.0;
  double delta = 0.3;
  double eps_scale = 1.0;   // eps_n = eps_scale / (n+1)^2
  double phi_scale = 1.0;   // phi_n = phi_scale / (n+1)
  double f_coeff = 0.9;     // viscosity contraction f(x) = f_coeff * x
  double fixed_gamma = 0.0; // fixed-step baselines; <= 0 derives a default
  double armijo_alpha = 0.5;
  double armijo_ell = 0.5;
  double armijo_phi = 0.4;

  SolverConfig solver_config() const;
};

// Raised for malformed or out-of-range configuration input; the message
// names the offending line when parsing a config file.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Optional overrides collected from a config file or CLI flags. Unset
// fields inherit preset defaults.
struct ConfigOverrides {
  std::optional<std::string> preset;
  std::optional<std::size_t> m;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<std::string>> algorithms;
  std::optional<int> max_iters;
  std::optional<double> stop_tol;
  std::optional<std::string> out_dir;
  std::optional<double> phi, gamma1, delta, eps_scale, phi_scale, f_coeff,
      fixed_gamma, armijo_alpha, armijo_ell, armijo_phi;
};

// Parses `key=value` lines ('#' comments and blank lines allowed). Unknown
// keys, malformed lines, and out-of-range values raise ConfigError naming
// the line number.
ConfigOverrides parse_overrides(const std::string& text);

// Applies overrides on top of the preset's documented defaults; validates
// ranges (phi in (0,1), gamma1 > 0, delta >= 0, ...).
ExperimentSpec resolve_spec(const ConfigOverrides& overrides);

// parse_overrides + resolve_spec; the text must name a preset.
ExperimentSpec parse_config(const std::string& text);

struct AlgorithmSummary {
  AlgorithmKind algorithm;
  StopReason reason = StopReason::MaxIters;
  int iterations = 0;
  double final_error = 0.0;  // NaN when the solution is unknown
  double final_residual = 0.0;
  std::uint64_t op_evals = 0;
  std::int64_t elapsed_ns = 0;
  Vector x;
};

struct ExperimentResult {
  ExperimentSpec spec;
  Vector initial_point;  // shared by every algorithm (x0 = x1)
  std::vector<AlgorithmSummary> summaries;
  std::vector<std::filesystem::path> trace_files;
  std::filesystem::path summary_file;
};

// Builds the preset problem, draws one initial point, runs every requested
// algorithm on its own problem clone, writes one trace CSV per algorithm
// plus summary.csv (and final trajectories for control presets) into
// spec.out_dir. Divergence of one algorithm does not abort the others.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Problem instance and initial point for a spec (x0 = x1, deterministic in
// the seed). Exposed for tests and the Python bindings.
Problem make_problem(const ExperimentSpec& spec);
Vector initial_point(const ExperimentSpec& spec);

// Trace CSV: header n,D_n,E_n,gamma_n,delta_n,error,op_evals,elapsed_ns;
// floating-point fields use 17 significant digits so values round-trip.
void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path);
IterationTrace read_trace_csv(const std::filesystem::path& path);

void write_summary_csv(const std::vector<AlgorithmSummary>& summaries,
                       const std::filesystem::path& path);

std::string format_summary_table(const std::vector<AlgorithmSummary>& summaries);

}  // namespace visolve

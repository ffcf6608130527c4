#include "visolve/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace visolve {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail_line(int lineno, const std::string& what) {
  throw ConfigError("line " + std::to_string(lineno) + ": " + what);
}

double parse_double(const std::string& value, int lineno, const std::string& key) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    fail_line(lineno, "value '" + value + "' for " + key + " is not a number");
  }
  if (pos != value.size())
    fail_line(lineno, "trailing characters in value '" + value + "' for " + key);
  return v;
}

std::uint64_t parse_u64(const std::string& value, int lineno, const std::string& key) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &pos);
  } catch (const std::exception&) {
    fail_line(lineno, "value '" + value + "' for " + key + " is not a nonnegative integer");
  }
  if (pos != value.size() || value.find('-') != std::string::npos)
    fail_line(lineno, "value '" + value + "' for " + key + " is not a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

void format17(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

double read_double_field(const std::string& field, const std::string& path, std::size_t lineno) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad numeric field '" +
                             field + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) fields.push_back(item);
  return fields;
}

constexpr const char* kTraceHeader = "n,D_n,E_n,gamma_n,delta_n,error,op_evals,elapsed_ns";

}  // namespace

// ── Presets ─────────────────────────────────────────────────────────────

std::string to_string(Preset preset) {
  switch (preset) {
    case Preset::Example1: return "example1";
    case Preset::Example2: return "example2";
    case Preset::Example3: return "example3";
    case Preset::Control41: return "control41";
    case Preset::Control42: return "control42";
  }
  return "unknown";
}

std::optional<Preset> preset_from_string(const std::string& name) {
  for (Preset p : all_presets())
    if (to_string(p) == name) return p;
  return std::nullopt;
}

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets{Preset::Example1, Preset::Example2,
                                           Preset::Example3, Preset::Control41,
                                           Preset::Control42};
  return presets;
}

SolverConfig ExperimentSpec::solver_config() const {
  SolverConfig config;
  config.delta = delta;
  config.gamma1 = gamma1;
  config.phi = phi;
  config.set_power_schedules(eps_scale, phi_scale);
  config.contraction = Contraction::scaling(f_coeff);
  config.max_iters = max_iters;
  config.stop_tol = stop_tol;
  config.fixed_gamma = fixed_gamma;
  config.armijo_alpha = armijo_alpha;
  config.armijo_ell = armijo_ell;
  config.armijo_phi = armijo_phi;
  return config;
}

// ── Config parsing ──────────────────────────────────────────────────────

ConfigOverrides parse_overrides(const std::string& text) {
  ConfigOverrides o;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail_line(lineno, "expected key=value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_line(lineno, "missing key before '='");
    if (value.empty()) fail_line(lineno, "missing value for key '" + key + "'");

    if (key == "preset") {
      if (!preset_from_string(value)) fail_line(lineno, "unknown preset '" + value + "'");
      o.preset = value;
    } else if (key == "m") {
      const std::uint64_t m = parse_u64(value, lineno, key);
      if (m == 0) fail_line(lineno, "m must be at least 1");
      o.m = static_cast<std::size_t>(m);
    } else if (key == "seed") {
      o.seed = parse_u64(value, lineno, key);
    } else if (key == "algorithms" || key == "algos") {
      const auto names = split_list(value);
      if (names.empty()) fail_line(lineno, "empty algorithm list");
      for (const auto& name : names)
        if (!algorithm_from_string(name)) fail_line(lineno, "unknown algorithm '" + name + "'");
      o.algorithms = names;
    } else if (key == "max_iters") {
      const std::uint64_t v = parse_u64(value, lineno, key);
      if (v == 0 || v > 100000000ULL) fail_line(lineno, "max_iters must be in [1, 1e8]");
      o.max_iters = static_cast<int>(v);
    } else if (key == "stop_tol") {
      const double v = parse_double(value, lineno, key);
      if (!(v >= 0.0)) fail_line(lineno, "stop_tol must be nonnegative");
      o.stop_tol = v;
    } else if (key == "out_dir") {
      o.out_dir = value;
    } else if (key == "phi") {
      const double v = parse_double(value, lineno, key);
      if (!(v > 0.0 && v < 1.0)) fail_line(lineno, "phi must be in (0,1)");
      o.phi = v;
    } else if (key == "gamma1") {
      const double v = parse_double(value, lineno, key);
      if (!(v > 0.0)) fail_line(lineno, "gamma1 must be positive");
      o.gamma1 = v;
    } else if (key == "delta") {
      const double v = parse_double(value, lineno, key);
      if (!(v >= 0.0)) fail_line(lineno, "delta must be nonnegative");
      o.delta = v;
    } else if (key == "eps_scale") {
      const double v = parse_double(value, lineno, key);
      if (!(v > 0.0)) fail_line(lineno, "eps_scale must be positive");
      o.eps_scale = v;
    } else if (key == "phi_scale") {
      const double v = parse_double(value, lineno, key);
      if (!(v > 0.0 && v < 2.0)) fail_line(lineno, "phi_scale must be in (0,2)");
      o.phi_scale = v;
    } else if (key == "f_coeff") {
      const double v = parse_double(value, lineno, key);
      if (!(v >= 0.0 && v < 1.0)) fail_line(lineno, "f_coeff must be in [0,1)");
      o.f_coeff = v;
    } else if (key == "fixed_gamma") {
      const double v = parse_double(value, lineno, key);
      if (!std::isfinite(v)) fail_line(lineno, "fixed_gamma must be finite");
      o.fixed_gamma = v;
    } else if (key == "armijo_alpha") {
      const double v = parse_double(value, lineno, key);
      if (!(v > 0.0)) fail_line(lineno, "armijo_alpha must be positive");
      o.armijo_alpha = v;
    } else if (key == "armijo_ell") {
      const double v = parse_double(value, lineno, key);
      if (!(v > 0.0 && v < 1.0)) fail_line(lineno, "armijo_ell must be in (0,1)");
      o.armijo_ell = v;
    } else if (key == "armijo_phi") {
      const double v = parse_double(value, lineno, key);
      if (!(v > 0.0 && v < 1.0)) fail_line(lineno, "armijo_phi must be in (0,1)");
      o.armijo_phi = v;
    } else {
      fail_line(lineno, "unknown key '" + key + "'");
    }
  }
  return o;
}

ExperimentSpec resolve_spec(const ConfigOverrides& o) {
  if (!o.preset)
    throw ConfigError("preset is required (one of example1, example2, example3, "
                      "control41, control42)");
  const auto preset = preset_from_string(*o.preset);
  if (!preset) throw ConfigError("unknown preset '" + *o.preset + "'");

  ExperimentSpec spec;
  spec.preset = *preset;
  switch (spec.preset) {
    case Preset::Example1:
      spec.max_iters = 50;
      break;
    case Preset::Example2:
      spec.max_iters = 1000;
      break;
    case Preset::Example3:
      spec.max_iters = 50;
      break;
    case Preset::Control41:
    case Preset::Control42:
      spec.max_iters = 1000;
      spec.stop_tol = 1e-4;
      spec.phi = 0.1;
      spec.gamma1 = 0.4;
      spec.eps_scale = 1e-4;
      spec.phi_scale = 1e-4;
      spec.f_coeff = 0.1;
      break;
  }

  if (o.m) spec.m = *o.m;
  if (o.seed) spec.seed = *o.seed;
  if (o.algorithms) {
    spec.algorithms.clear();
    for (const auto& name : *o.algorithms) {
      const auto kind = algorithm_from_string(name);
      if (!kind) throw ConfigError("unknown algorithm '" + name + "'");
      spec.algorithms.push_back(*kind);
    }
  }
  if (o.max_iters) spec.max_iters = *o.max_iters;
  if (o.stop_tol) spec.stop_tol = *o.stop_tol;
  if (o.out_dir) spec.out_dir = *o.out_dir;
  if (o.phi) spec.phi = *o.phi;
  if (o.gamma1) spec.gamma1 = *o.gamma1;
  if (o.delta) spec.delta = *o.delta;
  if (o.eps_scale) spec.eps_scale = *o.eps_scale;
  if (o.phi_scale) spec.phi_scale = *o.phi_scale;
  if (o.f_coeff) spec.f_coeff = *o.f_coeff;
  if (o.fixed_gamma) spec.fixed_gamma = *o.fixed_gamma;
  if (o.armijo_alpha) spec.armijo_alpha = *o.armijo_alpha;
  if (o.armijo_ell) spec.armijo_ell = *o.armijo_ell;
  if (o.armijo_phi) spec.armijo_phi = *o.armijo_phi;

  if (spec.algorithms.empty()) throw ConfigError("at least one algorithm is required");
  if (spec.m == 0) throw ConfigError("m must be at least 1");
  if (spec.max_iters < 1) throw ConfigError("max_iters must be at least 1");
  if (!(spec.stop_tol >= 0.0)) throw ConfigError("stop_tol must be nonnegative");
  if (!(spec.phi > 0.0 && spec.phi < 1.0)) throw ConfigError("phi must be in (0,1)");
  if (!(spec.gamma1 > 0.0)) throw ConfigError("gamma1 must be positive");
  if (!(spec.delta >= 0.0)) throw ConfigError("delta must be nonnegative");
  if (!(spec.eps_scale > 0.0)) throw ConfigError("eps_scale must be positive");
  if (!(spec.phi_scale > 0.0 && spec.phi_scale < 2.0))
    throw ConfigError("phi_scale must be in (0,2)");
  if (!(spec.f_coeff >= 0.0 && spec.f_coeff < 1.0)) throw ConfigError("f_coeff must be in [0,1)");
  return spec;
}

ExperimentSpec parse_config(const std::string& text) {
  return resolve_spec(parse_overrides(text));
}

// ── Problem instances and initial points ────────────────────────────────

namespace {

std::shared_ptr<const ControlProblem> control_instance(Preset preset) {
  switch (preset) {
    case Preset::Control41: return oscillator_problem(100);
    case Preset::Control42: return double_integrator_problem(100);
    default: return nullptr;
  }
}

}  // namespace

Problem make_problem(const ExperimentSpec& spec) {
  switch (spec.preset) {
    case Preset::Example1: return radial_argmin_problem(spec.m);
    case Preset::Example2: return random_affine_problem(spec.m, spec.seed);
    case Preset::Example3: return soft_sphere_problem(200);
    case Preset::Control41:
    case Preset::Control42: return build_vi_problem(control_instance(spec.preset));
  }
  throw std::logic_error("make_problem: unhandled preset");
}

Vector initial_point(const ExperimentSpec& spec) {
  Rng rng = Rng(spec.seed).split(5);
  switch (spec.preset) {
    case Preset::Example1:
    case Preset::Example2: {
      Vector x(spec.m);
      for (auto& v : x) v = rng.uniform();
      return x;
    }
    case Preset::Example3:
      return grid_samples(200, [](double t) { return t * t; });
    case Preset::Control41:
    case Preset::Control42: {
      Vector u(100);
      for (auto& v : u) v = rng.uniform(-1.0, 1.0);
      return u;
    }
  }
  throw std::logic_error("initial_point: unhandled preset");
}

// ── CSV emission ────────────────────────────────────────────────────────

void write_trace_csv(const IterationTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << kTraceHeader << "\n";
  std::string line;
  for (const TraceRow& row : trace.rows) {
    line.clear();
    line += std::to_string(row.n);
    line += ',';
    format17(line, row.D_n);
    line += ',';
    format17(line, row.E_n);
    line += ',';
    format17(line, row.gamma_n);
    line += ',';
    format17(line, row.delta_n);
    line += ',';
    format17(line, row.error);
    line += ',';
    line += std::to_string(row.op_evals);
    line += ',';
    line += std::to_string(row.elapsed_ns);
    out << line << "\n";
  }
  if (!out.flush()) throw std::runtime_error("short write to '" + path.string() + "'");
}

IterationTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("'" + path.string() + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader)
    throw std::runtime_error("'" + path.string() + "' has unexpected header '" + line + "'");

  IterationTrace trace;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 8)
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 8 fields, got " +
                               std::to_string(fields.size()));
    TraceRow row;
    row.n = static_cast<int>(read_double_field(fields[0], path.string(), lineno));
    row.D_n = read_double_field(fields[1], path.string(), lineno);
    row.E_n = read_double_field(fields[2], path.string(), lineno);
    row.gamma_n = read_double_field(fields[3], path.string(), lineno);
    row.delta_n = read_double_field(fields[4], path.string(), lineno);
    row.error = read_double_field(fields[5], path.string(), lineno);
    row.op_evals = static_cast<std::uint64_t>(std::strtoull(fields[6].c_str(), nullptr, 10));
    row.elapsed_ns = static_cast<std::int64_t>(std::strtoll(fields[7].c_str(), nullptr, 10));
    trace.rows.push_back(row);
  }
  return trace;
}

void write_summary_csv(const std::vector<AlgorithmSummary>& summaries,
                       const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << "algorithm,stop_reason,iterations,final_error,final_residual,op_evals,elapsed_ns\n";
  std::string line;
  for (const AlgorithmSummary& s : summaries) {
    line.clear();
    line += to_string(s.algorithm);
    line += ',';
    line += to_string(s.reason);
    line += ',';
    line += std::to_string(s.iterations);
    line += ',';
    format17(line, s.final_error);
    line += ',';
    format17(line, s.final_residual);
    line += ',';
    line += std::to_string(s.op_evals);
    line += ',';
    line += std::to_string(s.elapsed_ns);
    out << line << "\n";
  }
  if (!out.flush()) throw std::runtime_error("short write to '" + path.string() + "'");
}

std::string format_summary_table(const std::vector<AlgorithmSummary>& summaries) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-16s %-11s %6s %13s %13s %10s %10s\n", "algorithm",
                "stop_reason", "iters", "final_error", "final_resid", "op_evals", "time_ms");
  out += buf;
  for (const AlgorithmSummary& s : summaries) {
    std::snprintf(buf, sizeof(buf), "%-16s %-11s %6d %13.4e %13.4e %10llu %10.2f\n",
                  to_string(s.algorithm).c_str(), to_string(s.reason).c_str(), s.iterations,
                  s.final_error, s.final_residual,
                  static_cast<unsigned long long>(s.op_evals),
                  static_cast<double>(s.elapsed_ns) / 1e6);
    out += buf;
  }
  return out;
}

// ── Experiment driver ───────────────────────────────────────────────────

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.algorithms.empty())
    throw ConfigError("run_experiment: at least one algorithm is required");

  const std::filesystem::path out_dir(spec.out_dir);
  std::filesystem::create_directories(out_dir);

  const Problem base = make_problem(spec);
  const auto control = control_instance(spec.preset);

  ExperimentResult result;
  result.spec = spec;
  result.initial_point = initial_point(spec);

  const SolverConfig config = spec.solver_config();
  for (AlgorithmKind kind : spec.algorithms) {
    const Problem problem = base.with_fresh_counters();
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult solved =
        solve(problem, config, kind, result.initial_point, result.initial_point);
    const auto t1 = std::chrono::steady_clock::now();

    AlgorithmSummary summary;
    summary.algorithm = kind;
    summary.reason = solved.reason;
    summary.iterations = solved.iterations;
    summary.final_error =
        problem.known_solution()
            ? problem.space().distance(solved.x, *problem.known_solution())
            : kNaN;
    summary.final_residual =
        solved.trace.rows.empty() ? kNaN : solved.trace.rows.back().E_n;
    summary.op_evals = problem.eval_count();
    summary.elapsed_ns =
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    summary.x = solved.x;

    const auto trace_path = out_dir / ("trace_" + to_string(kind) + ".csv");
    write_trace_csv(solved.trace, trace_path);
    result.trace_files.push_back(trace_path);

    if (control)
      write_trajectory_csv(*control, solved.x,
                           out_dir / ("trajectory_" + to_string(kind) + ".csv"));

    result.summaries.push_back(std::move(summary));
  }

  result.summary_file = out_dir / "summary.csv";
  write_summary_csv(result.summaries, result.summary_file);
  std::cout << format_summary_table(result.summaries);
  return result;
}

}  // namespace visolve

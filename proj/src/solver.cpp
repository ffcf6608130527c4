#include "visolve/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace visolve {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_finite_iterates(int n, std::initializer_list<const Vector*> vs) {
  for (const Vector* v : vs)
    if (!all_finite(*v))
      throw DivergenceError(n, "iterate became non-finite at iteration " + std::to_string(n));
}

double fixed_step(const Problem& problem, const SolverConfig& config) {
  if (config.fixed_gamma > 0.0) return config.fixed_gamma;
  if (problem.lipschitz()) return 0.9 / *problem.lipschitz();
  return 0.1;
}

bool uses_viscosity(AlgorithmKind kind) {
  return kind == AlgorithmKind::TsengInertial || kind == AlgorithmKind::TsengViscosity ||
         kind == AlgorithmKind::ViSEGM;
}

bool uses_fixed_step(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::PGM:
    case AlgorithmKind::PRGM:
    case AlgorithmKind::EGM:
    case AlgorithmKind::TEGM:
    case AlgorithmKind::SEGM:
      return true;
    default:
      return false;
  }
}

double schedule_value(const std::function<double(int)>& schedule, int n, const char* name,
                      bool must_be_below_one) {
  const double v = schedule(n);
  if (!(v > 0.0) || (must_be_below_one && !(v < 1.0)))
    throw std::invalid_argument(std::string(name) + "(" + std::to_string(n) +
                                ") = " + std::to_string(v) + " is out of range");
  return v;
}

// x_{n+1} = phi_n f(z) + (1 - phi_n) z.
Vector viscosity_combine(const SolverConfig& config, int n, const Vector& z) {
  const double phi_n = schedule_value(config.phi_schedule, n, "phi_schedule", true);
  return combine(phi_n, config.contraction.map(z), 1.0 - phi_n, z);
}

}  // namespace

// ── Names ───────────────────────────────────────────────────────────────

std::string to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::TsengInertial: return "tseng_inertial";
    case AlgorithmKind::TsengViscosity: return "tseng_viscosity";
    case AlgorithmKind::PGM: return "pgm";
    case AlgorithmKind::PRGM: return "prgm";
    case AlgorithmKind::EGM: return "egm";
    case AlgorithmKind::TEGM: return "tegm";
    case AlgorithmKind::SEGM: return "segm";
    case AlgorithmKind::MaTEGM: return "mategm";
    case AlgorithmKind::ViSEGM: return "visegm";
  }
  return "unknown";
}

const std::vector<AlgorithmKind>& all_algorithms() {
  static const std::vector<AlgorithmKind> kinds{
      AlgorithmKind::TsengInertial, AlgorithmKind::TsengViscosity, AlgorithmKind::PGM,
      AlgorithmKind::PRGM,          AlgorithmKind::EGM,            AlgorithmKind::TEGM,
      AlgorithmKind::SEGM,          AlgorithmKind::MaTEGM,         AlgorithmKind::ViSEGM};
  return kinds;
}

std::optional<AlgorithmKind> algorithm_from_string(const std::string& name) {
  for (AlgorithmKind kind : all_algorithms())
    if (to_string(kind) == name) return kind;
  if (name == "matsegm") return AlgorithmKind::MaTEGM;  // accepted spelling variant
  return std::nullopt;
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Tolerance: return "tolerance";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::Divergence: return "divergence";
  }
  return "unknown";
}

// ── Config ──────────────────────────────────────────────────────────────

Contraction Contraction::scaling(double c) {
  require(c >= 0.0 && c < 1.0,
          "Contraction::scaling: coefficient must be in [0, 1), got " + std::to_string(c));
  return Contraction{[c](const Vector& x) { return scaled(c, x); }, c};
}

bool Contraction::verify(const HilbertSpace& space, Rng rng, std::size_t pairs) const {
  const std::size_t n = space.dim();
  Vector x(n), y(n);
  for (std::size_t k = 0; k < pairs; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = 2.0 * rng.normal();
      y[i] = 2.0 * rng.normal();
    }
    const double lhs = space.distance(map(x), map(y));
    if (lhs > modulus * space.distance(x, y) + 1e-10) return false;
  }
  return true;
}

SolverConfig::SolverConfig() { set_power_schedules(1.0, 1.0); }

void SolverConfig::set_power_schedules(double eps_scale, double phi_scale) {
  require(eps_scale > 0.0, "eps_scale must be positive");
  require(phi_scale > 0.0 && phi_scale < 2.0, "phi_scale must be in (0, 2)");
  eps_schedule = [eps_scale](int n) {
    const double k = static_cast<double>(n) + 1.0;
    return eps_scale / (k * k);
  };
  phi_schedule = [phi_scale](int n) { return phi_scale / (static_cast<double>(n) + 1.0); };
}

SolverConfig SolverConfig::paper_defaults() { return SolverConfig(); }

SolverConfig SolverConfig::control_defaults() {
  SolverConfig config;
  config.phi = 0.1;
  config.gamma1 = 0.4;
  config.delta = 0.3;
  config.set_power_schedules(1e-4, 1e-4);
  config.contraction = Contraction::scaling(0.1);
  config.stop_tol = 1e-4;
  config.max_iters = 1000;
  return config;
}

// ── Step rules ──────────────────────────────────────────────────────────

double inertia_coefficient(const HilbertSpace& space, const Vector& x,
                           const Vector& x_prev, double eps_n, double delta) {
  require(delta >= 0.0, "inertia_coefficient: delta must be >= 0");
  require(eps_n > 0.0, "inertia_coefficient: eps_n must be > 0");
  if (exactly_equal(x, x_prev)) return delta;
  const double d = space.distance(x, x_prev);
  if (!(eps_n / d < delta)) return delta;
  double coeff = eps_n / d;
  // Rounding of the quotient can put coeff * d one ulp above eps_n; nudge
  // down so delta_n * ||x_n - x_{n-1}|| <= eps_n holds as computed.
  while (coeff * d > eps_n) coeff = std::nextafter(coeff, 0.0);
  return coeff;
}

double step_size_update(const HilbertSpace& space, double gamma_n, double phi,
                        const Vector& s, const Vector& y, const Vector& As,
                        const Vector& Ay) {
  require(gamma_n > 0.0, "step_size_update: gamma_n must be > 0");
  require(phi > 0.0 && phi < 1.0, "step_size_update: phi must be in (0, 1)");
  if (exactly_equal(As, Ay)) return gamma_n;
  const double candidate = phi * space.distance(s, y) / space.distance(As, Ay);
  return std::min(candidate, gamma_n);
}

// ── Steps ───────────────────────────────────────────────────────────────

StepRecord tseng_inertial_step(SolverState& state, const Problem& problem,
                               const SolverConfig& config, bool inertial) {
  const HilbertSpace& space = problem.space();
  const int n = state.n;

  StepRecord rec;
  rec.n = n;
  rec.gamma_n = state.gamma;
  rec.delta_n = 0.0;
  if (inertial && config.delta > 0.0) {
    const double eps_n = schedule_value(config.eps_schedule, n, "eps_schedule", false);
    rec.delta_n = inertia_coefficient(space, state.x_cur, state.x_prev, eps_n, config.delta);
  }

  // s = x + delta_n (x - x_prev); the additive form keeps s == x exact
  // when the iterates have stalled.
  rec.s = add(state.x_cur, scaled(rec.delta_n, sub(state.x_cur, state.x_prev)));
  const Vector As = problem.evaluate(rec.s);
  rec.y = problem.project(combine(1.0, rec.s, -state.gamma, As));
  const Vector Ay = problem.evaluate(rec.y);
  rec.z = combine(1.0, rec.y, -state.gamma, sub(Ay, As));
  rec.x_next = viscosity_combine(config, n, rec.z);
  rec.gamma_next = step_size_update(space, state.gamma, config.phi, rec.s, rec.y, As, Ay);

  check_finite_iterates(n, {&rec.s, &rec.y, &rec.z, &rec.x_next});

  state.x_prev = std::move(state.x_cur);
  state.x_cur = rec.x_next;
  state.gamma = rec.gamma_next;
  state.n = n + 1;
  return rec;
}

namespace {

StepRecord mann_tseng_step(SolverState& state, const Problem& problem,
                           const SolverConfig& config) {
  const HilbertSpace& space = problem.space();
  const int n = state.n;
  require(config.armijo_alpha > 0.0, "armijo_alpha must be > 0");
  require(config.armijo_ell > 0.0 && config.armijo_ell < 1.0, "armijo_ell must be in (0, 1)");
  require(config.armijo_phi > 0.0 && config.armijo_phi < 1.0, "armijo_phi must be in (0, 1)");

  StepRecord rec;
  rec.n = n;
  rec.s = state.x_cur;

  const Vector Ax = problem.evaluate(state.x_cur);
  double gamma = config.armijo_alpha;
  Vector y, Ay;
  bool accepted = false;
  for (int q = 0; q <= 60; ++q) {
    gamma = config.armijo_alpha * std::pow(config.armijo_ell, q);
    y = problem.project(combine(1.0, state.x_cur, -gamma, Ax));
    Ay = problem.evaluate(y);
    if (gamma * space.distance(Ax, Ay) <= config.armijo_phi * space.distance(state.x_cur, y)) {
      accepted = true;
      rec.backtracks = q;
      break;
    }
  }
  if (!accepted)
    throw LineSearchError("backtracking failed after 60 halvings at iteration " +
                          std::to_string(n));

  rec.gamma_n = gamma;
  rec.gamma_next = gamma;
  rec.y = y;
  rec.z = combine(1.0, y, -gamma, sub(Ay, Ax));

  const double phi_n = schedule_value(config.phi_schedule, n, "phi_schedule", true);
  const double tau_n = 0.5 * (1.0 - phi_n);
  rec.x_next = combine(1.0 - phi_n - tau_n, state.x_cur, tau_n, rec.z);

  check_finite_iterates(n, {&rec.y, &rec.z, &rec.x_next});

  state.x_prev = std::move(state.x_cur);
  state.x_cur = rec.x_next;
  state.gamma = gamma;
  state.n = n + 1;
  return rec;
}

StepRecord visegm_step(SolverState& state, const Problem& problem, const SolverConfig& config) {
  const HilbertSpace& space = problem.space();
  const int n = state.n;

  StepRecord rec;
  rec.n = n;
  rec.gamma_n = state.gamma;
  rec.delta_n = 0.0;
  if (config.delta > 0.0) {
    const double eps_n = schedule_value(config.eps_schedule, n, "eps_schedule", false);
    rec.delta_n = inertia_coefficient(space, state.x_cur, state.x_prev, eps_n, config.delta);
  }

  rec.s = add(state.x_cur, scaled(rec.delta_n, sub(state.x_cur, state.x_prev)));
  const Vector As = problem.evaluate(rec.s);
  const Vector shifted = combine(1.0, rec.s, -state.gamma, As);
  rec.y = problem.project(shifted);
  const Vector Ay = problem.evaluate(rec.y);

  // Half-space {x : <shifted - y, x - y> <= 0} contains C; projecting onto
  // it is closed-form and replaces a second projection onto C.
  const Vector normal = sub(shifted, rec.y);
  const Vector pre = combine(1.0, rec.s, -state.gamma, Ay);
  if (space.norm_sq(normal) > 0.0) {
    FeasibleSet half =
        FeasibleSet::half_space(space, normal, space.inner(normal, rec.y));
    rec.z = half.project(pre);
  } else {
    rec.z = pre;
  }

  rec.x_next = viscosity_combine(config, n, rec.z);
  rec.gamma_next = step_size_update(space, state.gamma, config.phi, rec.s, rec.y, As, Ay);

  check_finite_iterates(n, {&rec.s, &rec.y, &rec.z, &rec.x_next});

  state.x_prev = std::move(state.x_cur);
  state.x_cur = rec.x_next;
  state.gamma = rec.gamma_next;
  state.n = n + 1;
  return rec;
}

StepRecord fixed_step_baseline(AlgorithmKind kind, SolverState& state, const Problem& problem,
                               [[maybe_unused]] const SolverConfig& config) {
  const HilbertSpace& space = problem.space();
  const int n = state.n;
  const double gamma = state.gamma;
  require(gamma > 0.0, "baseline_step: fixed step must be positive");

  StepRecord rec;
  rec.n = n;
  rec.gamma_n = gamma;
  rec.gamma_next = gamma;
  rec.s = state.x_cur;

  switch (kind) {
    case AlgorithmKind::PGM: {
      const Vector Ax = problem.evaluate(state.x_cur);
      rec.y = problem.project(combine(1.0, state.x_cur, -gamma, Ax));
      rec.z = rec.y;
      rec.x_next = rec.y;
      break;
    }
    case AlgorithmKind::PRGM: {
      const Vector reflected = combine(2.0, state.x_cur, -1.0, state.x_prev);
      const Vector Ar = problem.evaluate(reflected);
      rec.y = problem.project(combine(1.0, state.x_cur, -gamma, Ar));
      rec.z = rec.y;
      rec.x_next = rec.y;
      break;
    }
    case AlgorithmKind::EGM: {
      const Vector Ax = problem.evaluate(state.x_cur);
      rec.y = problem.project(combine(1.0, state.x_cur, -gamma, Ax));
      const Vector Ay = problem.evaluate(rec.y);
      rec.z = problem.project(combine(1.0, state.x_cur, -gamma, Ay));
      rec.x_next = rec.z;
      break;
    }
    case AlgorithmKind::TEGM: {
      const Vector Ax = problem.evaluate(state.x_cur);
      rec.y = problem.project(combine(1.0, state.x_cur, -gamma, Ax));
      const Vector Ay = problem.evaluate(rec.y);
      rec.z = combine(1.0, rec.y, -gamma, sub(Ay, Ax));
      rec.x_next = rec.z;
      break;
    }
    case AlgorithmKind::SEGM: {
      const Vector Ax = problem.evaluate(state.x_cur);
      const Vector shifted = combine(1.0, state.x_cur, -gamma, Ax);
      rec.y = problem.project(shifted);
      const Vector Ay = problem.evaluate(rec.y);
      const Vector normal = sub(shifted, rec.y);
      const Vector pre = combine(1.0, state.x_cur, -gamma, Ay);
      if (space.norm_sq(normal) > 0.0) {
        FeasibleSet half =
            FeasibleSet::half_space(space, normal, space.inner(normal, rec.y));
        rec.z = half.project(pre);
      } else {
        rec.z = pre;
      }
      rec.x_next = rec.z;
      break;
    }
    default:
      throw std::invalid_argument("baseline_step: not a fixed-step kind");
  }

  check_finite_iterates(n, {&rec.y, &rec.z, &rec.x_next});

  state.x_prev = std::move(state.x_cur);
  state.x_cur = rec.x_next;
  state.n = n + 1;
  return rec;
}

}  // namespace

StepRecord baseline_step(AlgorithmKind kind, SolverState& state, const Problem& problem,
                         const SolverConfig& config) {
  switch (kind) {
    case AlgorithmKind::TsengInertial:
      return tseng_inertial_step(state, problem, config, true);
    case AlgorithmKind::TsengViscosity:
      return tseng_inertial_step(state, problem, config, false);
    case AlgorithmKind::MaTEGM:
      return mann_tseng_step(state, problem, config);
    case AlgorithmKind::ViSEGM:
      return visegm_step(state, problem, config);
    default:
      return fixed_step_baseline(kind, state, problem, config);
  }
}

std::pair<double, double> residuals(const Problem& problem, const Vector& s, double gamma,
                                    const Vector& x, const Vector& x_prev) {
  const HilbertSpace& space = problem.space();
  const double D = space.distance(x, x_prev);
  const Vector As = problem.evaluate(s);
  const Vector y = problem.project(combine(1.0, s, -gamma, As));
  return {D, space.distance(s, y)};
}

// ── Driver ──────────────────────────────────────────────────────────────

SolveResult solve(const Problem& problem, const SolverConfig& config, AlgorithmKind kind,
                  Vector x0, Vector x1, const StepObserver& observer) {
  const HilbertSpace& space = problem.space();
  space.check(x0, "solve: x0");
  space.check(x1, "solve: x1");
  require(config.delta >= 0.0, "solve: delta must be >= 0");
  require(config.gamma1 > 0.0, "solve: gamma1 must be > 0");
  require(config.phi > 0.0 && config.phi < 1.0, "solve: phi must be in (0, 1)");
  require(config.max_iters >= 0, "solve: max_iters must be >= 0");
  require(config.stop_tol >= 0.0, "solve: stop_tol must be >= 0");
  require(static_cast<bool>(config.eps_schedule), "solve: eps_schedule is empty");
  require(static_cast<bool>(config.phi_schedule), "solve: phi_schedule is empty");

  if (uses_viscosity(kind)) {
    require(static_cast<bool>(config.contraction.map), "solve: contraction map is empty");
    require(config.contraction.modulus >= 0.0 && config.contraction.modulus < 1.0,
            "solve: contraction modulus must be in [0, 1)");
    if (!config.contraction.verify(space, Rng(0x5EED5EED5EEDULL)))
      throw std::invalid_argument(
          "solve: contraction map violates its claimed modulus on sampled pairs");
  }

  SolverState state;
  state.n = 1;
  state.x_prev = problem.project(std::move(x0));
  state.x_cur = problem.project(std::move(x1));
  state.gamma = uses_fixed_step(kind) ? fixed_step(problem, config) : config.gamma1;

  SolveResult result;
  result.reason = StopReason::MaxIters;
  if (config.record_trace && config.max_iters > 0)
    result.trace.rows.reserve(static_cast<std::size_t>(config.max_iters));

  const auto start = std::chrono::steady_clock::now();
  const std::optional<Vector>& known = problem.known_solution();

  for (int n = 1; n <= config.max_iters; ++n) {
    const double D_n = space.distance(state.x_cur, state.x_prev);
    const double error = known ? space.distance(state.x_cur, *known) : kNaN;

    StepRecord rec;
    try {
      rec = baseline_step(kind, state, problem, config);
    } catch (const DivergenceError&) {
      result.reason = StopReason::Divergence;
      result.iterations = n;
      break;
    }

    result.iterations = n;
    if (config.record_trace) {
      TraceRow row;
      row.n = n;
      row.D_n = D_n;
      row.E_n = space.distance(rec.s, rec.y);
      row.gamma_n = rec.gamma_n;
      row.delta_n = rec.delta_n;
      row.error = error;
      row.op_evals = problem.eval_count();
      row.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
      result.trace.rows.push_back(std::move(row));
    }
    if (observer) observer(rec);

    // state.x_prev now holds x_n, state.x_cur holds x_{n+1}.
    if (space.distance(state.x_cur, state.x_prev) <= config.stop_tol) {
      result.reason = StopReason::Tolerance;
      break;
    }
  }

  result.x = state.x_cur;
  return result;
}

}  // namespace visolve

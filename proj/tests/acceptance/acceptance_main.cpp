// Acceptance gate: one self-contained check per shipped guarantee, each
// printed as a single PASS/FAIL line with its wall time. Exits nonzero if
// any check fails. Budgets are asserted where a check carries one; timing
// of the algorithms themselves is reported but never compared.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "visolve/harness.hpp"

using namespace visolve;

namespace {

using Clock = std::chrono::steady_clock;

struct CheckFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& detail) {
  if (!condition) throw CheckFailure(detail);
}

std::string strf(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buffer[512];
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

ExperimentSpec spec_for(const std::string& preset, std::size_t m, std::uint64_t seed,
                        int max_iters = 0) {
  ConfigOverrides o;
  o.preset = preset;
  if (m > 0) o.m = m;
  o.seed = seed;
  if (max_iters > 0) o.max_iters = max_iters;
  return resolve_spec(o);
}

// ── individual checks ───────────────────────────────────────────────────

void check_projections() {
  const double tol = 1e-10;
  for (std::size_t dim : {std::size_t{2}, std::size_t{5}, std::size_t{50}}) {
    const HilbertSpace space = HilbertSpace::euclidean(dim);
    Rng rng(1000 + dim);

    Vector normal(dim), center(dim), lo(dim, -1.5), hi(dim, 2.0);
    for (auto& v : normal) v = rng.uniform(-1.0, 1.0);
    normal[0] += 2.0;
    for (auto& v : center) v = rng.uniform(-0.5, 0.5);
    const FeasibleSet sets[] = {FeasibleSet::half_space(space, normal, 0.75),
                                FeasibleSet::box(space, lo, hi),
                                FeasibleSet::ball(space, center, 1.25)};

    for (const FeasibleSet& set : sets) {
      for (int pair = 0; pair < 1000; ++pair) {
        Vector x(dim), x2(dim);
        for (auto& v : x) v = rng.uniform(-3.0, 3.0);
        for (auto& v : x2) v = rng.uniform(-3.0, 3.0);
        const Vector member = set.sample(rng);
        const Vector px = set.project(x);
        const Vector px2 = set.project(x2);

        // Variational characterization of the nearest point.
        require(space.inner(sub(x, px), sub(member, px)) <= tol,
                "projection characterization violated");
        // Exact idempotence.
        const Vector ppx = set.project(px);
        require(exactly_equal(ppx, px), "projection not exactly idempotent");
        // Firm nonexpansiveness.
        const double lhs = space.inner(sub(px, px2), sub(px, px2));
        const double rhs = space.inner(sub(px, px2), sub(x, x2));
        require(lhs <= rhs + tol, "projection not firmly nonexpansive");
      }
    }

    if (dim == 2) {
      // Dense-grid oracle: the projection must essentially match a brute
      // force nearest feasible grid point.
      const double lo_w = -3.0, hi_w = 3.0;
      const int cells = 120;
      const double spacing = (hi_w - lo_w) / cells;
      for (const FeasibleSet& set : sets) {
        for (int trial = 0; trial < 10; ++trial) {
          Vector x{rng.uniform(lo_w, hi_w), rng.uniform(lo_w, hi_w)};
          const Vector px = set.project(x);
          double best = std::numeric_limits<double>::infinity();
          for (int i = 0; i <= cells; ++i)
            for (int j = 0; j <= cells; ++j) {
              Vector p{lo_w + i * spacing, lo_w + j * spacing};
              if (set.violation(p) > 1e-12) continue;
              const double d = space.distance(p, x);
              if (d < best) best = d;
            }
          require(std::isfinite(best), "grid oracle found no feasible point");
          // Agreement is judged on the achieved distance: near a curved
          // boundary the grid argmin position is ill-conditioned, but its
          // distance to x must match the projection's within the grid
          // resolution, and the exact projection must never lose to it.
          const double dist_px = space.distance(x, px);
          require(std::abs(dist_px - best) <= 2.0 * spacing,
                  "projection distance disagrees with the dense-grid oracle");
          require(dist_px <= best + 1e-12,
                  "grid oracle found a strictly closer feasible point");
        }
      }
    }
  }
}

void check_step_size_floor() {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ExperimentSpec spec = spec_for("example2", 10, seed, 1000);
    const Problem problem = make_problem(spec);
    const SolveResult result = solve(problem, spec.solver_config(),
                                     AlgorithmKind::TsengInertial, initial_point(spec),
                                     initial_point(spec));
    const auto& rows = result.trace.rows;
    require(rows.size() == 1000, "expected a full 1000-iteration trace");
    for (std::size_t i = 1; i < rows.size(); ++i)
      require(rows[i].gamma_n <= rows[i - 1].gamma_n,
              strf("step size increased at iteration %d (seed %" PRIu64 ")",
                   rows[i].n, seed));
    const double floor = std::min(spec.gamma1, spec.phi / problem.lipschitz().value());
    require(rows.back().gamma_n >= floor - 1e-12,
            strf("final step %.17g fell below the floor %.17g (seed %" PRIu64 ")",
                 rows.back().gamma_n, floor, seed));
  }
}

void check_affine_convergence() {
  for (std::size_t m : {std::size_t{5}, std::size_t{10}, std::size_t{20}}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ExperimentSpec spec = spec_for("example2", m, seed, 1000);
      const Problem problem = make_problem(spec);
      const SolveResult result = solve(problem, spec.solver_config(),
                                       AlgorithmKind::TsengInertial,
                                       initial_point(spec), initial_point(spec));
      double best = std::numeric_limits<double>::infinity();
      for (const TraceRow& row : result.trace.rows) best = std::min(best, row.error);
      best = std::min(best, problem.space().norm(result.x));
      require(best <= 1e-3,
              strf("m=%zu seed=%" PRIu64 ": best ||x_n|| = %.3e > 1e-3", m, seed, best));
    }
  }
}

void check_soft_sphere_convergence() {
  const ExperimentSpec spec = spec_for("example3", 0, 1, 200);
  const Problem problem = make_problem(spec);
  const SolveResult result = solve(problem, spec.solver_config(),
                                   AlgorithmKind::TsengInertial, initial_point(spec),
                                   initial_point(spec));
  double best = std::numeric_limits<double>::infinity();
  for (const TraceRow& row : result.trace.rows) best = std::min(best, row.error);
  best = std::min(best, problem.space().norm(result.x));
  require(best <= 1e-2, strf("best ||x_n|| = %.3e > 1e-2", best));
}

void check_residual_trend() {
  for (std::size_t m : {std::size_t{5}, std::size_t{20}}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const ExperimentSpec spec = spec_for("example1", m, seed, 50);
      const Problem problem = make_problem(spec);
      const SolveResult result = solve(problem, spec.solver_config(),
                                       AlgorithmKind::TsengInertial,
                                       initial_point(spec), initial_point(spec));
      const auto& rows = result.trace.rows;
      require(rows.size() == 50, "expected a 50-iteration trace");
      for (const TraceRow& row : rows)
        require(std::isfinite(row.D_n),
                strf("D_n not finite at iteration %d (m=%zu seed=%" PRIu64 ")",
                     row.n, m, seed));
      require(rows.back().E_n <= rows.front().E_n / 10.0,
              strf("m=%zu seed=%" PRIu64 ": E_50 = %.3e vs E_1 = %.3e", m, seed,
                   rows.back().E_n, rows.front().E_n));
    }
  }
}

void check_nonmonotone_witness() {
  const Problem problem = soft_sphere_problem(200);
  const HilbertSpace& space = problem.space();
  const Vector ones(space.dim(), 1.0);
  const Vector witness = scaled(0.72 / space.norm(ones), ones);
  const Vector stretched = scaled(1.1, witness);

  const double value = space.inner(sub(problem.evaluate(witness), problem.evaluate(stretched)),
                                   sub(witness, stretched));
  const double closed_form = (1.0 - 1.1) * (1.0 - 1.1) * 0.72 * 0.72 * (1.5 - 2.1 * 0.72);
  require(value < 0.0, strf("witness inner product %.3e is not negative", value));
  require(std::abs(value - closed_form) <= 1e-8 * std::abs(closed_form),
          strf("witness %.17g vs closed form %.17g", value, closed_form));
}

// Sign agreement between a recovered control and the reference, skipping
// cells whose midpoint lies within `skip` of a reference switching time.
double sign_agreement(const Vector& u, double horizon,
                      const std::function<double(double)>& reference,
                      const std::vector<double>& switches, double skip) {
  const double h = horizon / static_cast<double>(u.size());
  int counted = 0, agreed = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double t = (static_cast<double>(i) + 0.5) * h;
    bool near_switch = false;
    for (double s : switches)
      if (std::abs(t - s) <= skip) near_switch = true;
    if (near_switch) continue;
    ++counted;
    const double want = reference(t);
    if ((want > 0 && u[i] > 0) || (want < 0 && u[i] < 0)) ++agreed;
  }
  if (counted == 0) return 0.0;
  return static_cast<double>(agreed) / counted;
}

void check_oscillator_control() {
  const ExperimentSpec spec = spec_for("control41", 0, 1);
  const Problem problem = make_problem(spec);
  const SolveResult result = solve(problem, spec.solver_config(),
                                   AlgorithmKind::TsengInertial, initial_point(spec),
                                   initial_point(spec));
  require(result.reason == StopReason::Tolerance,
          "oscillator run did not reach the stopping tolerance");
  require(result.iterations <= 1000,
          strf("oscillator run took %d iterations", result.iterations));

  const double pi = std::numbers::pi;
  const double horizon = 3.0 * pi;
  const double cell = horizon / 100.0;
  const std::vector<double> expected{pi / 2.0, 3.0 * pi / 2.0, 5.0 * pi / 2.0};

  const auto switches = switching_times(result.x, horizon);
  require(switches.size() == 3,
          strf("expected 3 switches, found %zu", switches.size()));
  for (std::size_t k = 0; k < 3; ++k)
    require(std::abs(switches[k] - expected[k]) <= 2.0 * cell,
            strf("switch %zu at %.4f vs reference %.4f", k, switches[k], expected[k]));

  const double agreement = sign_agreement(
      result.x, horizon, [](double t) { return std::cos(t); }, expected, 2.0 * cell);
  require(agreement >= 0.95,
          strf("sign agreement %.3f < 0.95 away from switches", agreement));
}

void check_double_integrator_control() {
  const ExperimentSpec spec = spec_for("control42", 0, 1);
  const Problem problem = make_problem(spec);
  const SolveResult result = solve(problem, spec.solver_config(),
                                   AlgorithmKind::TsengInertial, initial_point(spec),
                                   initial_point(spec));
  require(result.iterations <= 1000, "unexpected iteration count");
  const double agreement = sign_agreement(
      result.x, 2.0, [](double t) { return t < 1.2 ? 1.0 : -1.0; }, {}, 0.0);
  require(agreement >= 0.90, strf("sign agreement %.3f < 0.90", agreement));
}

void check_control_gradients() {
  Rng rng(4242);
  for (const auto& control : {oscillator_problem(100), double_integrator_problem(100)}) {
    for (int trial = 0; trial < 10; ++trial) {
      Vector u(control->intervals());
      for (auto& v : u) v = rng.uniform(-1.0, 1.0);
      const Vector adjoint = control->gradient(u);

      double scale = 1e-12;
      for (double g : adjoint) scale = std::max(scale, std::abs(g));
      for (std::size_t j = 0; j < u.size(); ++j) {
        Vector hi = u, lo = u;
        hi[j] += 1e-6;
        lo[j] -= 1e-6;
        const double fd = (control->objective(hi) - control->objective(lo)) / 2e-6;
        const double denom = std::max({std::abs(adjoint[j]), std::abs(fd), 0.01 * scale});
        require(std::abs(adjoint[j] - fd) <= 1e-6 * denom,
                strf("gradient component %zu: adjoint %.9e vs fd %.9e", j, adjoint[j], fd));
      }
    }
  }

  // For the oscillator the discrete gradient is control-independent.
  const auto oscillator = oscillator_problem(100);
  const Vector base = oscillator->gradient(Vector(100, 0.0));
  for (int trial = 0; trial < 3; ++trial) {
    Vector u(100);
    for (auto& v : u) v = rng.uniform(-1.0, 1.0);
    const Vector g = oscillator->gradient(u);
    for (std::size_t j = 0; j < g.size(); ++j)
      require(std::abs(g[j] - base[j]) <= 1e-12,
              strf("gradient drifted by %.3e at component %zu", std::abs(g[j] - base[j]), j));
  }
}

void check_contraction_monitor() {
  for (std::size_t m : {std::size_t{5}, std::size_t{10}, std::size_t{20}}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ExperimentSpec spec = spec_for("example2", m, seed, 1000);
      const Problem problem = make_problem(spec);
      const HilbertSpace space = problem.space();
      const double phi = spec.phi;
      int monitored = 0;
      const StepObserver observer = [&](const StepRecord& rec) {
        const double ratio = rec.gamma_n / rec.gamma_next;
        const double bracket = 1.0 - phi * phi * ratio * ratio;
        if (bracket <= 0.0) return;
        ++monitored;
        const double z_sq = space.inner(rec.z, rec.z);
        const double s_sq = space.inner(rec.s, rec.s);
        const Vector diff = sub(rec.s, rec.y);
        const double residual_sq = space.inner(diff, diff);
        require(z_sq <= s_sq - bracket * residual_sq + 1e-8,
                strf("contraction inequality violated at iteration %d "
                     "(m=%zu seed=%" PRIu64 ")", rec.n, m, seed));
      };
      (void)solve(problem, spec.solver_config(), AlgorithmKind::TsengInertial,
                  initial_point(spec), initial_point(spec), observer);
      require(monitored > 0, "monitor never engaged");
    }
  }
}

std::string check_cost_accounting() {
  const ExperimentSpec spec = spec_for("example2", 10, 1, 1000);
  const Problem problem = make_problem(spec).with_fresh_counters();
  const SolverConfig config = spec.solver_config();

  SolverState state;
  state.n = 1;
  state.x_prev = problem.project(initial_point(spec));
  state.x_cur = state.x_prev;
  state.gamma = config.gamma1;

  const auto t0 = Clock::now();
  std::uint64_t evals = problem.eval_count();
  std::uint64_t projections = problem.projection_count();
  for (int n = 0; n < 200; ++n) {
    (void)tseng_inertial_step(state, problem, config);
    const std::uint64_t e = problem.eval_count();
    const std::uint64_t p = problem.projection_count();
    require(e - evals == 2, strf("step %d used %" PRIu64 " evaluations", n + 1, e - evals));
    require(p - projections == 1,
            strf("step %d used %" PRIu64 " projections", n + 1, p - projections));
    evals = e;
    projections = p;
  }
  const double tseng_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  // The backtracking baseline pays at least two evaluations every iteration.
  const Problem problem2 = make_problem(spec).with_fresh_counters();
  SolverState state2;
  state2.n = 1;
  state2.x_prev = problem2.project(initial_point(spec));
  state2.x_cur = state2.x_prev;
  state2.gamma = config.gamma1;
  const auto t1 = Clock::now();
  std::uint64_t evals2 = problem2.eval_count();
  for (int n = 0; n < 1000; ++n) {
    (void)baseline_step(AlgorithmKind::MaTEGM, state2, problem2, config);
    const std::uint64_t e = problem2.eval_count();
    require(e - evals2 >= 2,
            strf("backtracking step %d used only %" PRIu64 " evaluations", n + 1, e - evals2));
    evals2 = e;
  }
  const double mategm_seconds = std::chrono::duration<double>(Clock::now() - t1).count();

  // Wall-clock numbers are informational only.
  return strf("timings (reported, not asserted): 200 adaptive steps %.3fs, "
              "1000 backtracking steps %.3fs", tseng_seconds, mategm_seconds);
}

struct Criterion {
  std::string name;
  double budget_seconds;  // 0 = no budget
  std::function<std::string()> run;  // returns optional detail suffix
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"1. metric projections: characterization, exact idempotence, firmness, grid oracle",
       10.0, [] { check_projections(); return std::string(); }},
      {"2. adaptive step sizes are nonincreasing and respect the safety floor",
       5.0, [] { check_step_size_floor(); return std::string(); }},
      {"3. random affine preset converges to the zero solution (m in {5,10,20}, seeds 1-5)",
       30.0, [] { check_affine_convergence(); return std::string(); }},
      {"4. soft-sphere preset converges from the t^2 profile",
       10.0, [] { check_soft_sphere_convergence(); return std::string(); }},
      {"5. radial argmin preset: natural residual drops 10x over 50 iterations",
       10.0, [] { check_residual_trend(); return std::string(); }},
      {"6. soft-sphere operator is non-monotone: witness matches the closed form",
       0.0, [] { check_nonmonotone_witness(); return std::string(); }},
      {"7. oscillator control: tolerance reached, bang-bang switches recovered",
       10.0, [] { check_oscillator_control(); return std::string(); }},
      {"8. double-integrator control: sign agreement after the iteration cap",
       10.0, [] { check_double_integrator_control(); return std::string(); }},
      {"9. adjoint gradients match finite differences; oscillator gradient is constant",
       0.0, [] { check_control_gradients(); return std::string(); }},
      {"10. per-iteration contraction inequality holds whenever its bracket is positive",
       0.0, [] { check_contraction_monitor(); return std::string(); }},
      {"11. cost accounting: 2 evaluations + 1 projection per adaptive step",
       0.0, check_cost_accounting},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = Clock::now();
    std::string verdict = "PASS";
    std::string detail;
    try {
      detail = criterion.run();
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
      ++failures;
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (verdict == "PASS" && criterion.budget_seconds > 0.0 &&
        seconds > criterion.budget_seconds) {
      verdict = "FAIL";
      detail = strf("runtime %.2fs exceeded the %.0fs budget", seconds,
                    criterion.budget_seconds);
      ++failures;
    }
    std::printf("%s  %s (%.2f s)%s%s\n", verdict.c_str(), criterion.name.c_str(), seconds,
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
  }

  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
    return 0;
  }
  std::printf("acceptance: %d of %zu criteria FAILED\n", failures, criteria.size());
  return 1;
}

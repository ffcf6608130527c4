#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "visolve/problem.hpp"

namespace visolve {

// Iterative schemes for pseudomonotone variational inequalities. The primary
// scheme is a Tseng-type forward-backward-forward splitting with inertial
// extrapolation, a self-adaptive step size, and viscosity anchoring:
//
//   s_n = x_n + delta_n (x_n - x_{n-1})
//   y_n = P_C(s_n - gamma_n A(s_n))
//   z_n = y_n - gamma_n (A(y_n) - A(s_n))
//   x_{n+1} = phi_n f(z_n) + (1 - phi_n) z_n
//
// with
//   delta_n   = min{ eps_n / ||x_n - x_{n-1}||, delta }   (delta if x_n == x_{n-1})
//   gamma_{n+1} = min{ phi ||s_n - y_n|| / ||A(s_n) - A(y_n)||, gamma_n }
//                 (gamma_n if A(s_n) == A(y_n) componentwise)
//
// One iteration costs exactly two operator evaluations and one projection.
// The remaining kinds are fixed-step and adaptive baselines for comparison.
enum class AlgorithmKind {
  TsengInertial,   // the full scheme above
  TsengViscosity,  // same with delta_n = 0 (no inertial term)
  PGM,             // x_{n+1} = P_C(x_n - gamma A(x_n))
  PRGM,            // x_{n+1} = P_C(x_n - gamma A(2 x_n - x_{n-1}))
  EGM,             // extragradient: two projections per iteration
  TEGM,            // Tseng extragradient, fixed step
  SEGM,            // subgradient extragradient: second projection onto a half-space
  MaTEGM,          // Mann-type Tseng extragradient with Armijo backtracking
  ViSEGM,          // viscosity + inertia + adaptive step on SEGM
};

std::string to_string(AlgorithmKind kind);
std::optional<AlgorithmKind> algorithm_from_string(const std::string& name);
const std::vector<AlgorithmKind>& all_algorithms();

// Contractive self-map used by the viscosity step. solve() verifies the
// claimed modulus on 100 random pairs before iterating and throws
// std::invalid_argument when ||f(x)-f(y)|| > modulus*||x-y|| + 1e-10.
struct Contraction {
  std::function<Vector(const Vector&)> map;
  double modulus = 0.9;

  static Contraction scaling(double c);
  bool verify(const HilbertSpace& space, Rng rng, std::size_t pairs = 100) const;
};

struct SolverConfig {
  double delta = 0.3;    // inertia cap, >= 0
  double gamma1 = 1.0;   // initial step, > 0
  double phi = 0.8;      // adaptive step safety factor, in (0, 1)

  // eps_n and phi_n, indexed from n = 1. Defaults: 1/(n+1)^2 and 1/(n+1).
  std::function<double(int)> eps_schedule;
  std::function<double(int)> phi_schedule;

  Contraction contraction = Contraction::scaling(0.9);

  int max_iters = 1000;
  double stop_tol = 0.0;  // applied to ||x_{n+1} - x_n||
  bool record_trace = true;

  // Fixed-step baselines (PGM/PRGM/EGM/TEGM/SEGM). Nonpositive means derive:
  // 0.9 / L when the problem knows its Lipschitz constant, else 0.1.
  double fixed_gamma = 0.0;

  // MaTEGM backtracking: gamma = armijo_alpha * armijo_ell^q for the smallest
  // q >= 0 with gamma ||A(x)-A(y)|| <= armijo_phi ||x-y||.
  double armijo_alpha = 0.5;
  double armijo_ell = 0.5;
  double armijo_phi = 0.4;

  SolverConfig();

  // Convenience: eps_n = eps_scale/(n+1)^2, phi_n = phi_scale/(n+1).
  void set_power_schedules(double eps_scale, double phi_scale);

  static SolverConfig paper_defaults();    // phi 0.8, gamma1 1, delta 0.3, f = 0.9x
  static SolverConfig control_defaults();  // phi 0.1, gamma1 0.4, scales 1e-4, f = 0.1x
};

struct SolverState {
  int n = 1;
  Vector x_prev;
  Vector x_cur;
  double gamma = 1.0;
};

// Everything one iteration produced; enough to recompute the contraction
// inequality ||z-u||^2 <= ||s-u||^2 - (1 - phi^2 gamma_n^2/gamma_{n+1}^2)||s-y||^2
// that the adaptive Tseng schemes satisfy at solutions u.
struct StepRecord {
  int n = 0;
  double delta_n = 0.0;
  double gamma_n = 0.0;
  double gamma_next = 0.0;
  int backtracks = 0;  // MaTEGM trial rejections
  Vector s;            // extrapolated point the operator was evaluated at
  Vector y;            // projected point; ||s - y|| is the residual E_n
  Vector z;
  Vector x_next;
};

struct TraceRow {
  int n = 0;
  double D_n = 0.0;      // ||x_n - x_{n-1}||
  double E_n = 0.0;      // ||s_n - P_C(s_n - gamma_n A(s_n))||
  double gamma_n = 0.0;
  double delta_n = 0.0;
  double error = 0.0;    // ||x_n - known_solution||, NaN when unknown
  std::uint64_t op_evals = 0;   // cumulative operator evaluations
  std::int64_t elapsed_ns = 0;  // cumulative wall clock within solve()
};

struct IterationTrace {
  std::vector<TraceRow> rows;
};

enum class StopReason { Tolerance, MaxIters, Divergence };
std::string to_string(StopReason reason);

struct SolveResult {
  Vector x;
  IterationTrace trace;
  StopReason reason = StopReason::MaxIters;
  int iterations = 0;
};

// Thrown when an iterate turns non-finite.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(int iteration, const std::string& what)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

// Thrown when MaTEGM's backtracking fails 60 consecutive trials.
class LineSearchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// delta_n rule. The returned coefficient satisfies
// delta_n * ||x - x_prev|| <= eps_n in floating point (nudged down by ulps
// when rounding of the quotient would break the inequality).
double inertia_coefficient(const HilbertSpace& space, const Vector& x,
                           const Vector& x_prev, double eps_n, double delta);

// gamma_{n+1} rule; the As == Ay branch tests exact componentwise equality.
double step_size_update(const HilbertSpace& space, double gamma_n, double phi,
                        const Vector& s, const Vector& y, const Vector& As,
                        const Vector& Ay);

// One iteration of the inertial viscosity Tseng scheme; advances `state` and
// returns the step's internals. `inertial = false` forces delta_n = 0.
StepRecord tseng_inertial_step(SolverState& state, const Problem& problem,
                               const SolverConfig& config, bool inertial = true);

// One iteration of `kind` for the baseline schemes.
StepRecord baseline_step(AlgorithmKind kind, SolverState& state, const Problem& problem,
                         const SolverConfig& config);

// D_n = ||x - x_prev|| and E_n = ||s - P_C(s - gamma A(s))||, evaluated
// honestly (one operator evaluation, one projection). E_n = 0 exactly when
// s is a fixed point of the projected step.
std::pair<double, double> residuals(const Problem& problem, const Vector& s,
                                    double gamma, const Vector& x, const Vector& x_prev);

using StepObserver = std::function<void(const StepRecord&)>;

// Runs `kind` from x0, x1 (both projected into C first) until
// ||x_{n+1} - x_n|| <= stop_tol or max_iters iterations. Divergence is
// reported in the result, not thrown. The trace holds one row per iteration
// when record_trace is set.
SolveResult solve(const Problem& problem, const SolverConfig& config, AlgorithmKind kind,
                  Vector x0, Vector x1, const StepObserver& observer = {});

}  // namespace visolve

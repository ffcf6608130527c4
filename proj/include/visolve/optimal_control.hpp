#pragma once

#include <filesystem>
#include <functional>
#include <memory>

#include "visolve/matrix.hpp"
#include "visolve/problem.hpp"
#include "visolve/space.hpp"

namespace visolve {

// Linear-dynamics optimal control with a terminal cost and box-constrained
// scalar control, discretized into N piecewise-constant control cells:
//
//   x'(t) = A x(t) + b u(t),  x(0) = x0,  u(t) in [lower, upper]
//   minimize  cost(x(T))
//
// The discrete trajectory uses classical RK4 with 4 substeps per cell, and
// the objective gradient comes from reverse (adjoint) accumulation through
// the exact same stage arithmetic, so it is the exact gradient of the
// discrete objective.
class ControlProblem {
 public:
  using Cost = std::function<double(const Vector&)>;
  using CostGradient = std::function<Vector(const Vector&)>;

  // Throws std::invalid_argument on dimension mismatches, a nonpositive
  // horizon, empty bounds, or a cost gradient that fails a central
  // finite-difference check (rel. err 1e-6) at probe states.
  ControlProblem(Matrix dynamics, Vector input, double horizon, Vector initial_state,
                 Cost cost, CostGradient cost_gradient, double lower, double upper,
                 std::size_t intervals);

  std::size_t state_dim() const { return dynamics_.rows; }
  std::size_t intervals() const { return intervals_; }
  double horizon() const { return horizon_; }
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }
  const Matrix& dynamics() const { return dynamics_; }
  const Vector& input() const { return input_; }
  const Vector& initial_state() const { return initial_state_; }

  // States at the N+1 cell boundaries; row k is x(k * T/N).
  std::vector<Vector> simulate(const Vector& u) const;

  double objective(const Vector& u) const;

  // Exact gradient of the discrete objective with respect to the control
  // cells (one forward and one adjoint sweep, no extra simulations).
  Vector gradient(const Vector& u) const;

  double cost(const Vector& terminal_state) const { return cost_(terminal_state); }
  Vector cost_gradient(const Vector& terminal_state) const { return cost_gradient_(terminal_state); }

 private:
  void substep_forward(const Vector& x, double u, Vector& out, Vector stages[4]) const;

  Matrix dynamics_;
  Vector input_;
  double horizon_;
  Vector initial_state_;
  Cost cost_;
  CostGradient cost_gradient_;
  double lower_, upper_;
  std::size_t intervals_;
  double substep_h_;
};

// The control VI: N-dimensional control space with uniform weights T/N
// (so norms approximate the L2[0,T] norm), feasible set Box[lower, upper]^N,
// and operator the objective gradient represented in that weighted inner
// product, i.e. (N/T) * ControlProblem::gradient. Positive scaling leaves
// the solution set unchanged while keeping the operator O(1) per cell.
Problem build_vi_problem(std::shared_ptr<const ControlProblem> control);

// x1' = x2, x2' = -x1 + u, x(0) = 0, horizon 3*pi, minimize x2(T),
// u in [-1, 1], N = 100. Optimal control is bang-bang with switches at
// pi/2, 3*pi/2, 5*pi/2.
std::shared_ptr<const ControlProblem> oscillator_problem(std::size_t intervals = 100);

// x1' = x2, x2' = u, x(0) = 0, horizon 2, minimize -x1(T) + x2(T)^2,
// u in [-1, 1], N = 100. Optimal control switches from +1 to -1 at t = 1.2.
std::shared_ptr<const ControlProblem> double_integrator_problem(std::size_t intervals = 100);

// Midpoints of sign changes of u across its determinate cells (|u| >= 0.5);
// cells with |u| < 0.5 are skipped. Returned times lie in [0, horizon].
std::vector<double> switching_times(const Vector& u, double horizon);

// CSV with columns t, u(t), x1(t), ..., xd(t): one row per cell boundary,
// control values repeated for the final row.
void write_trajectory_csv(const ControlProblem& control, const Vector& u,
                          const std::filesystem::path& path);

}  // namespace visolve

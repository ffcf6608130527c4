#include "visolve/optimal_control.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "visolve/rng.hpp"

namespace visolve {

namespace {

// Central finite-difference probe for a user-supplied gradient oracle.
bool gradient_matches_fd(const ControlProblem::Cost& cost,
                         const ControlProblem::CostGradient& grad, const Vector& x) {
  const Vector g = grad(x);
  if (g.size() != x.size()) return false;
  double scale = 1e-12;
  for (double v : g) scale = std::max(scale, std::abs(v));
  const double fd_step = 1e-6;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Vector hi = x, lo = x;
    hi[i] += fd_step;
    lo[i] -= fd_step;
    const double fd = (cost(hi) - cost(lo)) / (2.0 * fd_step);
    const double tol = 1e-6 * std::max({std::abs(g[i]), std::abs(fd), 0.01 * scale, 1e-9});
    if (std::abs(g[i] - fd) > tol) return false;
  }
  return true;
}

}  // namespace

ControlProblem::ControlProblem(Matrix dynamics, Vector input, double horizon,
                               Vector initial_state, Cost cost, CostGradient cost_gradient,
                               double lower, double upper, std::size_t intervals)
    : dynamics_(std::move(dynamics)),
      input_(std::move(input)),
      horizon_(horizon),
      initial_state_(std::move(initial_state)),
      cost_(std::move(cost)),
      cost_gradient_(std::move(cost_gradient)),
      lower_(lower),
      upper_(upper),
      intervals_(intervals) {
  if (dynamics_.rows == 0 || dynamics_.rows != dynamics_.cols)
    throw std::invalid_argument("ControlProblem: dynamics matrix must be square and nonempty");
  if (input_.size() != dynamics_.rows)
    throw std::invalid_argument("ControlProblem: input vector size " +
                                std::to_string(input_.size()) + " does not match state dim " +
                                std::to_string(dynamics_.rows));
  if (initial_state_.size() != dynamics_.rows)
    throw std::invalid_argument("ControlProblem: initial state has wrong dimension");
  if (!(horizon_ > 0.0)) throw std::invalid_argument("ControlProblem: horizon must be positive");
  if (!(lower_ <= upper_)) throw std::invalid_argument("ControlProblem: empty control bounds");
  if (intervals_ == 0) throw std::invalid_argument("ControlProblem: need at least one interval");
  if (!cost_ || !cost_gradient_)
    throw std::invalid_argument("ControlProblem: cost and gradient oracles are required");

  substep_h_ = horizon_ / static_cast<double>(intervals_) / 4.0;

  // The adjoint sweep seeds from the cost gradient, so a wrong oracle would
  // silently corrupt every solve; probe it against central differences now.
  Rng rng(0xC057C057ULL);
  for (int probe = 0; probe < 3; ++probe) {
    Vector x(dynamics_.rows);
    for (auto& v : x) v = rng.uniform(-2.0, 2.0);
    if (!gradient_matches_fd(cost_, cost_gradient_, x))
      throw std::invalid_argument(
          "ControlProblem: cost gradient disagrees with finite differences");
  }
}

void ControlProblem::substep_forward(const Vector& x, double u, Vector& out,
                                     Vector stages[4]) const {
  const double h = substep_h_;
  const std::size_t d = dynamics_.rows;
  Vector bu = scaled(u, input_);

  stages[0] = add(dynamics_.apply(x), bu);                                   // k1
  stages[1] = add(dynamics_.apply(add(x, scaled(h / 2.0, stages[0]))), bu);  // k2
  stages[2] = add(dynamics_.apply(add(x, scaled(h / 2.0, stages[1]))), bu);  // k3
  stages[3] = add(dynamics_.apply(add(x, scaled(h, stages[2]))), bu);        // k4

  out.resize(d);
  for (std::size_t i = 0; i < d; ++i)
    out[i] = x[i] + h / 6.0 * (stages[0][i] + 2.0 * stages[1][i] + 2.0 * stages[2][i] +
                               stages[3][i]);
}

std::vector<Vector> ControlProblem::simulate(const Vector& u) const {
  if (u.size() != intervals_)
    throw std::invalid_argument("ControlProblem::simulate: control has " +
                                std::to_string(u.size()) + " cells, expected " +
                                std::to_string(intervals_));
  std::vector<Vector> states;
  states.reserve(intervals_ + 1);
  states.push_back(initial_state_);
  Vector x = initial_state_, next;
  Vector stages[4];
  for (std::size_t j = 0; j < intervals_; ++j) {
    for (int sub = 0; sub < 4; ++sub) {
      substep_forward(x, u[j], next, stages);
      x = next;
    }
    states.push_back(x);
  }
  return states;
}

double ControlProblem::objective(const Vector& u) const {
  return cost_(simulate(u).back());
}

Vector ControlProblem::gradient(const Vector& u) const {
  // Forward sweep for the terminal state, then the exact transpose of the
  // RK4 stage arithmetic backwards. The dynamics are linear, so the reverse
  // recursion needs only the dynamics matrix, never the stored states.
  const std::vector<Vector> states = simulate(u);
  Vector lambda = cost_gradient_(states.back());
  if (lambda.size() != dynamics_.rows)
    throw std::runtime_error("ControlProblem::gradient: cost gradient has wrong dimension");

  const double h = substep_h_;
  Vector grad(intervals_, 0.0);
  for (std::size_t jj = intervals_; jj-- > 0;) {
    for (int sub = 0; sub < 4; ++sub) {
      const Vector lk4 = scaled(h / 6.0, lambda);
      const Vector lk3 = add(scaled(h / 3.0, lambda), scaled(h, dynamics_.apply_transpose(lk4)));
      const Vector lk2 =
          add(scaled(h / 3.0, lambda), scaled(h / 2.0, dynamics_.apply_transpose(lk3)));
      const Vector lk1 =
          add(scaled(h / 6.0, lambda), scaled(h / 2.0, dynamics_.apply_transpose(lk2)));
      Vector sum = add(add(lk1, lk2), add(lk3, lk4));
      double du = 0.0;
      for (std::size_t i = 0; i < input_.size(); ++i) du += input_[i] * sum[i];
      grad[jj] += du;
      lambda = add(lambda, dynamics_.apply_transpose(sum));
    }
  }
  return grad;
}

// ── VI wrapper and presets ──────────────────────────────────────────────

Problem build_vi_problem(std::shared_ptr<const ControlProblem> control) {
  if (!control) throw std::invalid_argument("build_vi_problem: null control problem");
  const std::size_t n = control->intervals();
  const double horizon = control->horizon();
  HilbertSpace space = HilbertSpace::uniform(n, horizon);
  FeasibleSet set = FeasibleSet::box(space, Vector(n, control->lower_bound()),
                                     Vector(n, control->upper_bound()));
  // Gradient represented in the T/N-weighted inner product; the positive
  // rescaling keeps the solution set and lets step sizes stay O(1) in N.
  const double riesz = static_cast<double>(n) / horizon;
  return Problem(space, set, [control, riesz](const Vector& u) {
    return scaled(riesz, control->gradient(u));
  });
}

std::shared_ptr<const ControlProblem> oscillator_problem(std::size_t intervals) {
  Matrix A(2, 2);
  A.at(0, 1) = 1.0;
  A.at(1, 0) = -1.0;
  return std::make_shared<const ControlProblem>(
      A, Vector{0.0, 1.0}, 3.0 * std::numbers::pi, Vector{0.0, 0.0},
      [](const Vector& x) { return x[1]; },
      [](const Vector& x) {
        (void)x;
        return Vector{0.0, 1.0};
      },
      -1.0, 1.0, intervals);
}

std::shared_ptr<const ControlProblem> double_integrator_problem(std::size_t intervals) {
  Matrix A(2, 2);
  A.at(0, 1) = 1.0;
  return std::make_shared<const ControlProblem>(
      A, Vector{0.0, 1.0}, 2.0, Vector{0.0, 0.0},
      [](const Vector& x) { return -x[0] + x[1] * x[1]; },
      [](const Vector& x) { return Vector{-1.0, 2.0 * x[1]}; }, -1.0, 1.0, intervals);
}

std::vector<double> switching_times(const Vector& u, double horizon) {
  if (u.empty()) return {};
  if (!(horizon > 0.0)) throw std::invalid_argument("switching_times: horizon must be positive");
  const double h = horizon / static_cast<double>(u.size());
  std::vector<double> times;
  bool have_prev = false;
  int prev_sign = 0;
  std::size_t prev_index = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[i]) < 0.5) continue;  // indeterminate cell: ignore
    const int sign = u[i] > 0.0 ? 1 : -1;
    if (have_prev && sign != prev_sign) {
      // Boundary between the two determinate cells: midpoint of the gap.
      times.push_back(0.5 * (static_cast<double>(prev_index + 1) + static_cast<double>(i)) * h);
    }
    have_prev = true;
    prev_sign = sign;
    prev_index = i;
  }
  return times;
}

void write_trajectory_csv(const ControlProblem& control, const Vector& u,
                          const std::filesystem::path& path) {
  const std::vector<Vector> states = control.simulate(u);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");

  out << "t,u";
  for (std::size_t i = 0; i < control.state_dim(); ++i) out << ",x" << (i + 1);
  out << "\n";

  char buf[64];
  const auto put = [&](double v, bool last) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << (last ? "\n" : ",");
  };
  const double cell = control.horizon() / static_cast<double>(control.intervals());
  for (std::size_t k = 0; k < states.size(); ++k) {
    put(static_cast<double>(k) * cell, false);
    put(k < u.size() ? u[k] : u.back(), false);
    for (std::size_t i = 0; i < states[k].size(); ++i)
      put(states[k][i], i + 1 == states[k].size());
  }
  if (!out.flush()) throw std::runtime_error("short write to '" + path.string() + "'");
}

}  // namespace visolve

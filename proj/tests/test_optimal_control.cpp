#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "test_util.hpp"
#include "visolve/optimal_control.hpp"
#include "visolve/solver.hpp"

using namespace visolve;
using testutil::same_bits;

namespace {

// Relative mismatch with a floor so near-zero components do not blow up the
// ratio: scale by max(|a|, |b|, 1% of the largest reference entry).
double rel_mismatch(const Vector& a, const Vector& b) {
  const double scale = std::max(testutil::max_abs(a), 1e-12);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(b[i]), 0.01 * scale});
    worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
  }
  return worst;
}

Vector fd_gradient(const ControlProblem& control, const Vector& u, double step = 1e-6) {
  Vector grad(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    Vector hi = u, lo = u;
    hi[j] += step;
    lo[j] -= step;
    grad[j] = (control.objective(hi) - control.objective(lo)) / (2.0 * step);
  }
  return grad;
}

}  // namespace

TEST_CASE("oscillator with unit forcing follows the closed-form trajectory") {
  // u == 1: x1(t) = 1 - cos t, x2(t) = sin t.
  const auto control = oscillator_problem(100);
  const Vector u(100, 1.0);
  const auto states = control->simulate(u);
  REQUIRE(states.size() == 101);
  CHECK(states[0][0] == 0.0);
  CHECK(states[0][1] == 0.0);

  const double cell = control->horizon() / 100.0;
  for (std::size_t k = 0; k <= 100; ++k) {
    const double t = k * cell;
    CHECK(std::abs(states[k][0] - (1.0 - std::cos(t))) < 1e-5);
    CHECK(std::abs(states[k][1] - std::sin(t)) < 1e-5);
  }
  CHECK(std::abs(control->objective(u) - std::sin(3.0 * std::numbers::pi)) < 1e-6);
}

TEST_CASE("the integrator converges at fourth order on the oscillator") {
  const double T = 3.0 * std::numbers::pi;
  const auto coarse = oscillator_problem(25);
  const auto fine = oscillator_problem(50);

  const auto terminal_error = [T](const ControlProblem& c, std::size_t n) {
    const auto states = c.simulate(Vector(n, 1.0));
    const Vector& xT = states.back();
    return std::hypot(xT[0] - (1.0 - std::cos(T)), xT[1] - std::sin(T));
  };
  const double e_coarse = terminal_error(*coarse, 25);
  const double e_fine = terminal_error(*fine, 50);
  REQUIRE(e_fine > 0.0);
  const double order = std::log2(e_coarse / e_fine);
  CHECK(order > 3.5);
  CHECK(order < 4.5);
}

TEST_CASE("double integrator reproduces its polynomial solution to roundoff") {
  // u == 1 from rest: x1 = t^2/2, x2 = t; the cost -x1(2) + x2(2)^2 = 2.
  const auto control = double_integrator_problem(50);
  const auto states = control->simulate(Vector(50, 1.0));
  const Vector& xT = states.back();
  CHECK(xT[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(xT[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(control->objective(Vector(50, 1.0)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("adjoint gradient agrees with central finite differences") {
  Rng rng(2025);
  for (const auto& control : {oscillator_problem(40), double_integrator_problem(40)}) {
    for (int trial = 0; trial < 3; ++trial) {
      Vector u(control->intervals());
      for (auto& v : u) v = rng.uniform(-1.0, 1.0);
      const Vector adjoint = control->gradient(u);
      const Vector fd = fd_gradient(*control, u);
      CHECK(rel_mismatch(adjoint, fd) <= 1e-6);
    }
  }
}

TEST_CASE("oscillator gradient does not depend on the control point") {
  // Linear dynamics and a linear terminal cost make the discrete gradient a
  // constant map; the adjoint sweep must reproduce it bit for bit.
  const auto control = oscillator_problem(100);
  Rng rng(8);
  Vector u1(100), u2(100);
  for (auto& v : u1) v = rng.uniform(-1.0, 1.0);
  for (auto& v : u2) v = rng.uniform(-1.0, 1.0);
  const Vector g0 = control->gradient(Vector(100, 0.0));
  CHECK(same_bits(control->gradient(u1), g0));
  CHECK(same_bits(control->gradient(u2), g0));
}

TEST_CASE("projected gradient steps do not increase the objective") {
  Rng rng(99);
  for (const auto& control : {oscillator_problem(30), double_integrator_problem(30)}) {
    const HilbertSpace space = HilbertSpace::euclidean(control->intervals());
    const FeasibleSet box =
        FeasibleSet::box(space, Vector(control->intervals(), control->lower_bound()),
                         Vector(control->intervals(), control->upper_bound()));
    for (int trial = 0; trial < 5; ++trial) {
      Vector u(control->intervals());
      for (auto& v : u) v = rng.uniform(-1.0, 1.0);
      const Vector stepped =
          box.project(sub(u, scaled(1e-4, control->gradient(u))));
      CHECK(control->objective(stepped) <= control->objective(u) + 1e-10);
    }
  }
}

TEST_CASE("constructor validation rejects malformed problems") {
  Matrix square(2, 2);
  Matrix tall(3, 2);
  const auto cost = [](const Vector& x) { return x[0]; };
  const auto grad = [](const Vector&) { return Vector{1.0, 0.0}; };

  CHECK_THROWS_AS(ControlProblem(tall, {0, 1}, 1.0, {0, 0}, cost, grad, -1, 1, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(ControlProblem(square, {0, 1, 2}, 1.0, {0, 0}, cost, grad, -1, 1, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(ControlProblem(square, {0, 1}, 0.0, {0, 0}, cost, grad, -1, 1, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(ControlProblem(square, {0, 1}, 1.0, {0, 0}, cost, grad, 1, -1, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(ControlProblem(square, {0, 1}, 1.0, {0, 0}, cost, grad, -1, 1, 0),
                  std::invalid_argument);

  // A cost gradient that lies about the cost fails the construction-time
  // finite-difference probe.
  const auto bad_grad = [](const Vector& x) { return Vector{3.0 * x[0], 0.0}; };
  const auto quad_cost = [](const Vector& x) { return x[0] * x[0]; };
  CHECK_THROWS_AS(ControlProblem(square, {0, 1}, 1.0, {0, 0}, quad_cost, bad_grad, -1, 1, 10),
                  std::invalid_argument);
}

TEST_CASE("the control VI carries the weighted space, box set, and scaled gradient") {
  const auto control = double_integrator_problem(20);
  const Problem problem = build_vi_problem(control);

  REQUIRE(problem.space().dim() == 20);
  const double weight = control->horizon() / 20.0;
  for (double w : problem.space().weights())
    CHECK(w == doctest::Approx(weight).epsilon(1e-15));

  CHECK(problem.set().contains(Vector(20, 1.0), 0.0));
  CHECK_FALSE(problem.set().contains(Vector(20, 1.01), 0.0));

  Rng rng(3);
  Vector u(20);
  for (auto& v : u) v = rng.uniform(-1.0, 1.0);
  const Vector op = problem.evaluate(u);
  const Vector expected = scaled(20.0 / control->horizon(), control->gradient(u));
  CHECK(same_bits(op, expected));
}

TEST_CASE("switching time extraction on hand-built controls") {
  CHECK(switching_times(Vector(10, 1.0), 2.0).empty());
  CHECK(switching_times({}, 2.0).empty());

  Vector half(10, 1.0);
  for (std::size_t i = 5; i < 10; ++i) half[i] = -1.0;
  const auto times = switching_times(half, 2.0);
  REQUIRE(times.size() == 1);
  CHECK(times[0] == doctest::Approx(1.0).epsilon(1e-15));

  // An indeterminate middle cell widens the located boundary to the gap
  // midpoint between the flanking determinate cells.
  const auto gapped = switching_times({1.0, 0.2, -1.0}, 3.0);
  REQUIRE(gapped.size() == 1);
  CHECK(gapped[0] == doctest::Approx(1.5).epsilon(1e-15));

  const auto double_switch = switching_times({1.0, -1.0, 1.0}, 3.0);
  REQUIRE(double_switch.size() == 2);
  CHECK(double_switch[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(double_switch[1] == doctest::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS((void)switching_times({1.0, -1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("solving the oscillator preset recovers the bang-bang switch structure") {
  const auto control = oscillator_problem(100);
  const Problem problem = build_vi_problem(control);

  SolverConfig config = SolverConfig::control_defaults();
  Rng rng = Rng(1).split(5);
  Vector u0(100);
  for (auto& v : u0) v = rng.uniform(-1.0, 1.0);

  const SolveResult result = solve(problem, config, AlgorithmKind::TsengInertial, u0, u0);
  CHECK(result.reason == StopReason::Tolerance);
  CHECK(result.iterations <= 1000);

  const double pi = std::numbers::pi;
  const auto switches = switching_times(result.x, control->horizon());
  REQUIRE(switches.size() == 3);
  const double cell = control->horizon() / 100.0;
  CHECK(std::abs(switches[0] - pi / 2.0) <= 2.0 * cell);
  CHECK(std::abs(switches[1] - 3.0 * pi / 2.0) <= 2.0 * cell);
  CHECK(std::abs(switches[2] - 5.0 * pi / 2.0) <= 2.0 * cell);

  // Optimizing improved on doing nothing.
  CHECK(control->objective(result.x) <= control->objective(Vector(100, 0.0)) + 1e-12);
}

TEST_CASE("trajectory CSV lists one row per cell boundary") {
  const auto control = double_integrator_problem(10);
  const auto path = std::filesystem::temp_directory_path() / "visolve_test_trajectory.csv";
  write_trajectory_csv(*control, Vector(10, 1.0), path);

  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "t,u,x1,x2");
  std::size_t rows = 0;
  std::string last;
  while (std::getline(in, line))
    if (!line.empty()) {
      ++rows;
      last = line;
    }
  CHECK(rows == 11);

  double t, u, x1, x2;
  REQUIRE(std::sscanf(last.c_str(), "%lf,%lf,%lf,%lf", &t, &u, &x1, &x2) == 4);
  CHECK(t == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(u == 1.0);
  CHECK(x1 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(x2 == doctest::Approx(2.0).epsilon(1e-9));
  std::filesystem::remove(path);
}

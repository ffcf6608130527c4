#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>

#include "visolve/feasible_set.hpp"
#include "visolve/matrix.hpp"
#include "visolve/rng.hpp"
#include "visolve/space.hpp"

namespace visolve {

using Operator = std::function<Vector(const Vector&)>;

// A variational inequality instance: find y* in C with <A(y*), z - y*> >= 0
// for all z in C. Bundles the operator oracle, the feasible set, and shared
// cost counters. Copies share counters; with_fresh_counters() starts new
// ones so per-algorithm accounting stays separate.
class Problem {
 public:
  Problem(HilbertSpace space, FeasibleSet set, Operator op,
          std::optional<double> lipschitz = std::nullopt,
          std::optional<Vector> known_solution = std::nullopt);

  const HilbertSpace& space() const { return space_; }
  const FeasibleSet& set() const { return set_; }

  // Operator oracle; every call counts one evaluation.
  Vector evaluate(const Vector& x) const;

  // Projection onto the feasible set; every call counts one projection.
  Vector project(const Vector& x) const;

  std::uint64_t eval_count() const { return counters_->evals.load(); }
  std::uint64_t projection_count() const { return counters_->projections.load(); }

  const std::optional<double>& lipschitz() const { return lipschitz_; }
  const std::optional<Vector>& known_solution() const { return known_solution_; }

  Problem with_fresh_counters() const;

 private:
  struct Counters {
    std::atomic<std::uint64_t> evals{0};
    std::atomic<std::uint64_t> projections{0};
  };

  HilbertSpace space_;
  FeasibleSet set_;
  Operator op_;
  std::optional<double> lipschitz_;
  std::optional<Vector> known_solution_;
  std::shared_ptr<Counters> counters_;
};

// ── Test operators ──────────────────────────────────────────────────────

// A(x) = Gx + g.
struct AffineOperator {
  Matrix G;
  Vector g;
  Vector operator()(const Vector& x) const { return add(G.apply(x), g); }
};

// Pseudomonotone, non-Lipschitz operator on Euclidean space:
//   A(x) = y*(x) / (||x||^2 + 1),  y*(x) = argmin_y { ||y||^4/4 + ||x-y||^2/2 }.
// The inner problem has the radial solution y* = (rho/||x||) x with rho the
// unique real root of rho^3 + rho = ||x||, found by Newton iteration.
Vector eval_radial_argmin(const Vector& x);

// Root of rho^3 + rho = r for r >= 0 (Newton, |rho^3 + rho - r| <= 1e-14
// up to the representable precision at r).
double radial_cubic_root(double r);

// (cap - ||x||) * x in the given space; pseudomonotone on balls of radius
// below cap, not monotone.
Vector eval_soft_sphere(const HilbertSpace& space, double cap, const Vector& x);

// Box [-5, 5]^m with the radial argmin operator; solution not recorded.
Problem radial_argmin_problem(std::size_t m);

// Random affine VI on Box[-2, 5]^m with solution 0:
//   G = B B^T + M + diag(E),  B and the skew generator uniform in [-2, 2],
//   E uniform in [0, 2], g = 0. Deterministic per (m, seed).
Problem random_affine_problem(std::size_t m, std::uint64_t seed);

// The building blocks of random_affine_problem; exposed so construction
// properties (skew-symmetry, PSD part, spectral norm) can be checked.
struct RandomAffineParts {
  Matrix B;
  Matrix M;
  Vector E;
  Matrix G;
  double spectral_norm;
};
RandomAffineParts random_affine_parts(std::size_t m, std::uint64_t seed);

// Spectral norm (largest singular value) by power iteration on G^T G:
// at most 200 iterations or relative change below 1e-12.
double spectral_norm(const Matrix& G, Rng rng);

// Soft-sphere operator with cap 1.5 on the unit ball of L2[0,1]
// (grid with `intervals` cells, default 200); solution 0.
Problem soft_sphere_problem(std::size_t intervals = 200);

// min over `samples` random points x in C of <A(x), x - candidate>.
// Nonnegative values are consistent with candidate solving the VI (Minty);
// a negative value certifies it does not. The candidate must lie in C
// (tolerance 1e-8), else std::invalid_argument.
double minty_certificate(const Problem& problem, const Vector& candidate,
                         std::size_t samples, Rng& rng);

}  // namespace visolve

#include "visolve/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace visolve {

Problem::Problem(HilbertSpace space, FeasibleSet set, Operator op,
                 std::optional<double> lipschitz, std::optional<Vector> known_solution)
    : space_(std::move(space)),
      set_(std::move(set)),
      op_(std::move(op)),
      lipschitz_(lipschitz),
      known_solution_(std::move(known_solution)),
      counters_(std::make_shared<Counters>()) {
  if (set_.space().dim() != space_.dim())
    throw std::invalid_argument("Problem: feasible set lives in a space of dimension " +
                                std::to_string(set_.space().dim()) + ", expected " +
                                std::to_string(space_.dim()));
  if (!op_) throw std::invalid_argument("Problem: operator oracle is empty");
  if (lipschitz_ && !(*lipschitz_ > 0.0))
    throw std::invalid_argument("Problem: Lipschitz constant must be positive");
  if (known_solution_) space_.check(*known_solution_, "Problem: known_solution");
}

Vector Problem::evaluate(const Vector& x) const {
  space_.check(x, "Problem::evaluate");
  Vector out = op_(x);
  if (out.size() != space_.dim())
    throw std::runtime_error("Problem::evaluate: operator returned a vector of size " +
                             std::to_string(out.size()) + ", expected " +
                             std::to_string(space_.dim()));
  counters_->evals.fetch_add(1, std::memory_order_relaxed);
  return out;
}

Vector Problem::project(const Vector& x) const {
  counters_->projections.fetch_add(1, std::memory_order_relaxed);
  return set_.project(x);
}

Problem Problem::with_fresh_counters() const {
  Problem copy = *this;
  copy.counters_ = std::make_shared<Counters>();
  return copy;
}

// ── Radial argmin operator ──────────────────────────────────────────────

double radial_cubic_root(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("radial_cubic_root: need r >= 0");
  if (r == 0.0) return 0.0;
  // rho^3 + rho - r is strictly increasing; Newton from below converges
  // monotonically. Stop at 1e-14 or at the representable precision near r.
  double rho = std::min(r, std::cbrt(r));
  const double tol = 1e-14 * std::max(1.0, r);
  for (int it = 0; it < 80; ++it) {
    const double f = rho * rho * rho + rho - r;
    if (std::abs(f) <= tol) break;
    const double step = f / (3.0 * rho * rho + 1.0);
    const double next = rho - step;
    if (next == rho) break;
    rho = next;
  }
  return rho;
}

Vector eval_radial_argmin(const Vector& x) {
  double nsq = 0.0;
  for (double v : x) nsq += v * v;
  const double r = std::sqrt(nsq);
  if (r == 0.0) return Vector(x.size(), 0.0);
  const double rho = radial_cubic_root(r);
  const double coeff = rho / (r * (nsq + 1.0));
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = coeff * x[i];
  return out;
}

Problem radial_argmin_problem(std::size_t m) {
  if (m == 0) throw std::invalid_argument("radial_argmin_problem: need m >= 1");
  HilbertSpace space = HilbertSpace::euclidean(m);
  FeasibleSet set = FeasibleSet::box(space, Vector(m, -5.0), Vector(m, 5.0));
  return Problem(space, set, [](const Vector& x) { return eval_radial_argmin(x); });
}

// ── Random affine VI ────────────────────────────────────────────────────

double spectral_norm(const Matrix& G, Rng rng) {
  const std::size_t n = G.cols;
  Vector v(n);
  double vn = 0.0;
  while (vn == 0.0) {
    for (auto& c : v) c = rng.normal();
    vn = 0.0;
    for (double c : v) vn += c * c;
    vn = std::sqrt(vn);
  }
  for (auto& c : v) c /= vn;

  double sigma = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vector w = G.apply_transpose(G.apply(v));  // (G^T G) v
    double lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += v[i] * w[i];
    const double next = std::sqrt(std::max(lambda, 0.0));
    double wn = 0.0;
    for (double c : w) wn += c * c;
    wn = std::sqrt(wn);
    if (wn == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
    if (it > 0 && std::abs(next - sigma) <= 1e-12 * std::max(next, 1e-300)) {
      sigma = next;
      break;
    }
    sigma = next;
  }
  return sigma;
}

RandomAffineParts random_affine_parts(std::size_t m, std::uint64_t seed) {
  if (m == 0) throw std::invalid_argument("random_affine_parts: need m >= 1");
  Rng rng(seed);

  RandomAffineParts parts;
  parts.B = Matrix(m, m);
  for (auto& v : parts.B.a) v = rng.uniform(-2.0, 2.0);

  // Skew part from a uniform generator K: M = (K - K^T)/2, so M^T = -M
  // exactly and entries stay in [-2, 2].
  Matrix K(m, m);
  for (auto& v : K.a) v = rng.uniform(-2.0, 2.0);
  parts.M = Matrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      parts.M.at(i, j) = (K.at(i, j) - K.at(j, i)) / 2.0;

  parts.E = Vector(m);
  for (auto& v : parts.E) v = rng.uniform(0.0, 2.0);

  parts.G = Matrix(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double bbt = 0.0;
      for (std::size_t k = 0; k < m; ++k) bbt += parts.B.at(i, k) * parts.B.at(j, k);
      parts.G.at(i, j) = bbt + parts.M.at(i, j) + (i == j ? parts.E[i] : 0.0);
    }

  parts.spectral_norm = spectral_norm(parts.G, Rng(seed).split(2));
  return parts;
}

Problem random_affine_problem(std::size_t m, std::uint64_t seed) {
  RandomAffineParts parts = random_affine_parts(m, seed);
  HilbertSpace space = HilbertSpace::euclidean(m);
  FeasibleSet set = FeasibleSet::box(space, Vector(m, -2.0), Vector(m, 5.0));
  AffineOperator op{std::move(parts.G), Vector(m, 0.0)};
  return Problem(space, set, op, parts.spectral_norm, Vector(m, 0.0));
}

// ── Soft-sphere operator ────────────────────────────────────────────────

Vector eval_soft_sphere(const HilbertSpace& space, double cap, const Vector& x) {
  const double coeff = cap - space.norm(x);
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = coeff * x[i];
  return out;
}

Problem soft_sphere_problem(std::size_t intervals) {
  HilbertSpace space = HilbertSpace::l2_grid(intervals);
  FeasibleSet set = FeasibleSet::ball(space, space.zero(), 1.0);
  return Problem(
      space, set,
      [space](const Vector& x) { return eval_soft_sphere(space, 1.5, x); },
      std::nullopt, space.zero());
}

// ── Minty certificate ───────────────────────────────────────────────────

double minty_certificate(const Problem& problem, const Vector& candidate,
                         std::size_t samples, Rng& rng) {
  problem.space().check(candidate, "minty_certificate");
  if (!problem.set().contains(candidate, 1e-8))
    throw std::invalid_argument("minty_certificate: candidate is not in the feasible set");
  if (samples == 0) throw std::invalid_argument("minty_certificate: need samples >= 1");

  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const Vector x = problem.set().sample(rng);
    const Vector Ax = problem.evaluate(x);
    worst = std::min(worst, problem.space().inner(Ax, sub(x, candidate)));
  }
  return worst;
}

}  // namespace visolve

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace visolve {

using Vector = std::vector<double>;

// Finite-dimensional real Hilbert space with a diagonal metric:
//   <x, y> = sum_i w_i * x_i * y_i,  w_i > 0.
// Euclidean spaces use w_i = 1; discretized L2[0,1] uses trapezoid weights.
// Instances are immutable and cheap to copy.
class HilbertSpace {
 public:
  static HilbertSpace euclidean(std::size_t dim);

  // Arbitrary positive weights; throws std::invalid_argument otherwise.
  static HilbertSpace weighted(Vector weights);

  // Uniformly weighted space for controls on [0, horizon]: `intervals`
  // components, each with weight horizon/intervals.
  static HilbertSpace uniform(std::size_t intervals, double horizon);

  // L2[0,1] on a uniform grid with `intervals` cells (intervals+1 nodes) and
  // trapezoid quadrature weights (h/2, h, ..., h, h/2). Weights sum to 1.
  static HilbertSpace l2_grid(std::size_t intervals);

  std::size_t dim() const { return weights_->size(); }
  const Vector& weights() const { return *weights_; }

  double inner(const Vector& x, const Vector& y) const;
  double norm_sq(const Vector& x) const;
  double norm(const Vector& x) const;
  double distance(const Vector& x, const Vector& y) const;

  Vector zero() const { return Vector(dim(), 0.0); }

  // Throws std::invalid_argument when x does not live in this space.
  void check(const Vector& x, const char* where) const;

 private:
  explicit HilbertSpace(Vector weights);

  std::shared_ptr<const Vector> weights_;
};

// a*x + b*y, componentwise; dimensions must agree.
Vector combine(double a, const Vector& x, double b, const Vector& y);

Vector add(const Vector& x, const Vector& y);
Vector sub(const Vector& x, const Vector& y);
Vector scaled(double a, const Vector& x);

bool all_finite(const Vector& x);

// Componentwise bitwise equality (no tolerance).
bool exactly_equal(const Vector& x, const Vector& y);

// Samples f at the nodes of the uniform grid on [0,1] with `intervals`
// cells; pairs with HilbertSpace::l2_grid.
Vector grid_samples(std::size_t intervals, const std::function<double(double)>& f);

}  // namespace visolve

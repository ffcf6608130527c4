#include "visolve/space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace visolve {

namespace {

void check_same_size(const Vector& x, const Vector& y, const char* where) {
  if (x.size() != y.size())
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
}

}  // namespace

HilbertSpace::HilbertSpace(Vector weights)
    : weights_(std::make_shared<const Vector>(std::move(weights))) {}

HilbertSpace HilbertSpace::euclidean(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("HilbertSpace::euclidean: zero dimension");
  return HilbertSpace(Vector(dim, 1.0));
}

HilbertSpace HilbertSpace::weighted(Vector weights) {
  if (weights.empty()) throw std::invalid_argument("HilbertSpace: no weights");
  for (double w : weights)
    if (!(w > 0.0))
      throw std::invalid_argument("HilbertSpace: weights must be positive, got " +
                                  std::to_string(w));
  return HilbertSpace(std::move(weights));
}

HilbertSpace HilbertSpace::uniform(std::size_t intervals, double horizon) {
  if (intervals == 0) throw std::invalid_argument("HilbertSpace::uniform: zero intervals");
  if (!(horizon > 0.0))
    throw std::invalid_argument("HilbertSpace::uniform: horizon must be positive");
  return HilbertSpace(Vector(intervals, horizon / static_cast<double>(intervals)));
}

HilbertSpace HilbertSpace::l2_grid(std::size_t intervals) {
  if (intervals == 0) throw std::invalid_argument("HilbertSpace::l2_grid: zero intervals");
  const double h = 1.0 / static_cast<double>(intervals);
  Vector w(intervals + 1, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return HilbertSpace(std::move(w));
}

void HilbertSpace::check(const Vector& x, const char* where) const {
  if (x.size() != dim())
    throw std::invalid_argument(std::string(where) + ": point of size " +
                                std::to_string(x.size()) + " not in a space of dimension " +
                                std::to_string(dim()));
}

double HilbertSpace::inner(const Vector& x, const Vector& y) const {
  check(x, "HilbertSpace::inner");
  check(y, "HilbertSpace::inner");
  const Vector& w = *weights_;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i] * y[i];
  return s;
}

double HilbertSpace::norm_sq(const Vector& x) const {
  check(x, "HilbertSpace::norm_sq");
  const Vector& w = *weights_;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i] * x[i];
  return s;
}

double HilbertSpace::norm(const Vector& x) const { return std::sqrt(norm_sq(x)); }

double HilbertSpace::distance(const Vector& x, const Vector& y) const {
  check(x, "HilbertSpace::distance");
  check(y, "HilbertSpace::distance");
  const Vector& w = *weights_;
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = x[i] - y[i];
    s += w[i] * d * d;
  }
  return std::sqrt(s);
}

Vector combine(double a, const Vector& x, double b, const Vector& y) {
  check_same_size(x, y, "combine");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

Vector add(const Vector& x, const Vector& y) {
  check_same_size(x, y, "add");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

Vector sub(const Vector& x, const Vector& y) {
  check_same_size(x, y, "sub");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

Vector scaled(double a, const Vector& x) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i];
  return out;
}

bool all_finite(const Vector& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

bool exactly_equal(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != y[i]) return false;
  return true;
}

Vector grid_samples(std::size_t intervals, const std::function<double(double)>& f) {
  if (intervals == 0) throw std::invalid_argument("grid_samples: zero intervals");
  Vector out(intervals + 1);
  const double h = 1.0 / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) out[i] = f(static_cast<double>(i) * h);
  return out;
}

}  // namespace visolve

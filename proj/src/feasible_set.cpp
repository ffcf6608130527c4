#include "visolve/feasible_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace visolve {

FeasibleSet FeasibleSet::half_space(HilbertSpace space, Vector normal, double offset) {
  space.check(normal, "FeasibleSet::half_space");
  double nsq = space.norm_sq(normal);
  if (!(nsq > 0.0))
    throw std::invalid_argument("FeasibleSet::half_space: normal must be nonzero");
  if (!std::isfinite(offset))
    throw std::invalid_argument("FeasibleSet::half_space: offset must be finite");
  return FeasibleSet(std::move(space), HalfSpaceData{std::move(normal), offset, nsq});
}

FeasibleSet FeasibleSet::box(HilbertSpace space, Vector lower, Vector upper) {
  space.check(lower, "FeasibleSet::box");
  space.check(upper, "FeasibleSet::box");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(lower[i] <= upper[i]))
      throw std::invalid_argument("FeasibleSet::box: empty interval at component " +
                                  std::to_string(i));
  return FeasibleSet(std::move(space), BoxData{std::move(lower), std::move(upper)});
}

FeasibleSet FeasibleSet::ball(HilbertSpace space, Vector center, double radius) {
  space.check(center, "FeasibleSet::ball");
  if (!(radius > 0.0))
    throw std::invalid_argument("FeasibleSet::ball: radius must be positive, got " +
                                std::to_string(radius));
  return FeasibleSet(std::move(space), BallData{std::move(center), radius});
}

FeasibleSet::Kind FeasibleSet::kind() const {
  if (std::holds_alternative<HalfSpaceData>(data_)) return Kind::HalfSpace;
  if (std::holds_alternative<BoxData>(data_)) return Kind::Box;
  return Kind::Ball;
}

double FeasibleSet::violation(const Vector& x) const {
  space_.check(x, "FeasibleSet::violation");
  if (const auto* hs = std::get_if<HalfSpaceData>(&data_)) {
    return space_.inner(hs->normal, x) - hs->offset;
  }
  if (const auto* b = std::get_if<BoxData>(&data_)) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i)
      worst = std::max(worst, std::max(b->lower[i] - x[i], x[i] - b->upper[i]));
    return worst;
  }
  const auto& ball = std::get<BallData>(data_);
  return space_.distance(x, ball.center) - ball.radius;
}

Vector FeasibleSet::project(const Vector& x) const {
  space_.check(x, "FeasibleSet::project");

  if (const auto* hs = std::get_if<HalfSpaceData>(&data_)) {
    // P(x) = x - max{(<u,x> - v)/<u,u>, 0} u. The correction is reapplied
    // while it strictly reduces the overshoot; once rounding stalls it, the
    // returned point is a fixed point of this very loop, so reprojecting
    // gives it back bitwise unchanged.
    double excess = space_.inner(hs->normal, x) - hs->offset;
    if (excess <= 0.0) return x;
    Vector p = x;
    while (excess > 0.0) {
      Vector q = p;
      const double t = excess / hs->normal_norm_sq;
      for (std::size_t i = 0; i < q.size(); ++i) q[i] -= t * hs->normal[i];
      const double next = space_.inner(hs->normal, q) - hs->offset;
      if (next >= excess) break;
      p = std::move(q);
      excess = next;
    }
    return p;
  }

  if (const auto* b = std::get_if<BoxData>(&data_)) {
    Vector p = x;
    for (std::size_t i = 0; i < p.size(); ++i)
      p[i] = std::min(b->upper[i], std::max(p[i], b->lower[i]));
    return p;
  }

  // Ball: radial pull-back, rescaled while it strictly reduces the distance
  // to the center; the same stall rule as above makes reprojection exact.
  const auto& ball = std::get<BallData>(data_);
  double r = space_.distance(x, ball.center);
  if (r <= ball.radius) return x;
  Vector p = x;
  while (r > ball.radius) {
    Vector q(p.size());
    const double scale = ball.radius / r;
    for (std::size_t i = 0; i < p.size(); ++i)
      q[i] = ball.center[i] + scale * (p[i] - ball.center[i]);
    const double next = space_.distance(q, ball.center);
    if (next >= r) break;
    p = std::move(q);
    r = next;
  }
  return p;
}

Vector FeasibleSet::sample(Rng& rng) const {
  const std::size_t n = space_.dim();
  if (const auto* hs = std::get_if<HalfSpaceData>(&data_)) {
    // Free Gaussian draw projected into the set; scaled so draws straddle
    // the boundary even when the offset is large.
    const double spread = 1.0 + std::abs(hs->offset) / std::sqrt(hs->normal_norm_sq);
    Vector z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = spread * rng.normal();
    return project(z);
  }
  if (const auto* b = std::get_if<BoxData>(&data_)) {
    Vector z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = rng.uniform(b->lower[i], b->upper[i]);
    return z;
  }
  const auto& ball = std::get<BallData>(data_);
  Vector dir(n);
  double nrm = 0.0;
  while (nrm == 0.0) {
    for (std::size_t i = 0; i < n; ++i) dir[i] = rng.normal();
    nrm = space_.norm(dir);
  }
  const double t = rng.uniform();  // in [0, 1): stays strictly inside
  const double scale = t * ball.radius / nrm;
  Vector z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = ball.center[i] + scale * dir[i];
  return project(z);
}

}  // namespace visolve

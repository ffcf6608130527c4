#pragma once

#include <variant>

#include "visolve/rng.hpp"
#include "visolve/space.hpp"

namespace visolve {

// Closed convex set with an exact metric projection. Three families cover
// every feasible region used by the solvers and test problems:
//
//   half-space  {x : <u, x> <= v},  u != 0
//   box         {x : a_i <= x_i <= b_i}
//   ball        {x : ||x - p|| <= q},  q > 0
//
// Inner products and norms are those of the set's Hilbert space, so the
// closed-form projections remain exact under diagonal metrics.
//
// project() guarantees two things beyond nearest-point accuracy:
//  * a point already in the set is returned unchanged (bitwise), and
//  * project(project(x)) == project(x) bitwise; the computed image is nudged
//    by at most a few ulps so it passes the membership test it is checked
//    against.
class FeasibleSet {
 public:
  enum class Kind { HalfSpace, Box, Ball };

  static FeasibleSet half_space(HilbertSpace space, Vector normal, double offset);
  static FeasibleSet box(HilbertSpace space, Vector lower, Vector upper);
  static FeasibleSet ball(HilbertSpace space, Vector center, double radius);

  const HilbertSpace& space() const { return space_; }
  Kind kind() const;

  Vector project(const Vector& x) const;

  // Signed violation of the defining inequality; <= 0 inside.
  //   half-space: <u, x> - v
  //   box:        max_i max(a_i - x_i, x_i - b_i)
  //   ball:       ||x - p|| - q
  double violation(const Vector& x) const;

  bool contains(const Vector& x, double tol) const { return violation(x) <= tol; }

  // A random point of the set; the support of the distribution covers the
  // interior. Boxes sample componentwise uniform, balls sample a scaled
  // random direction, half-spaces project a Gaussian draw.
  Vector sample(Rng& rng) const;

  struct HalfSpaceData {
    Vector normal;
    double offset;
    double normal_norm_sq;  // <u, u> in the set's space
  };
  struct BoxData {
    Vector lower, upper;
  };
  struct BallData {
    Vector center;
    double radius;
  };

  const HalfSpaceData* as_half_space() const { return std::get_if<HalfSpaceData>(&data_); }
  const BoxData* as_box() const { return std::get_if<BoxData>(&data_); }
  const BallData* as_ball() const { return std::get_if<BallData>(&data_); }

 private:
  FeasibleSet(HilbertSpace space, std::variant<HalfSpaceData, BoxData, BallData> data)
      : space_(std::move(space)), data_(std::move(data)) {}

  HilbertSpace space_;
  std::variant<HalfSpaceData, BoxData, BallData> data_;
};

}  // namespace visolve

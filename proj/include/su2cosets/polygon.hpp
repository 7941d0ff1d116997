#pragma once

#include <vector>

#include "su2cosets/actions.hpp"
#include "su2cosets/quaternion.hpp"
#include "su2cosets/rng.hpp"

namespace su2cosets {

// Closed polygonal curve A_1 A_2 ... A_m A_1 on S^3 with prescribed side
// lengths theta_k in (0, pi), pinned to the gauge A_1 = identity. The
// vertex chain is the partial-product chain of a conjugacy tuple
// (r_1, ..., r_m): A_{k+1} = A_k r_k with eigen_angle(r_k) = theta_k and
// r_1 ... r_m = 1.
struct SphericalPolygon {
  std::vector<UnitQuaternion> vertices;  // A_1 = identity
  std::vector<double> side_lengths;

  int sides() const { return static_cast<int>(side_lengths.size()); }
  // r_k = A_k^-1 A_{k+1}, cyclically.
  std::vector<UnitQuaternion> conjugacy_tuple() const;
};

// Builds the polygon from a conjugacy tuple; throws NotClosed when the
// full product deviates from the identity beyond 1e-9.
SphericalPolygon from_conjugacy_tuple(const std::vector<UnitQuaternion>& r);

// Samples a closed polygon with the given side lengths: random rotation
// axes for all but the last two sides, then a Newton polish of the last
// two axes to meet the closure condition. Throws Unsamplable when the
// attempt budget is exhausted (which may mean no such polygon exists).
SphericalPolygon sample_closed(const std::vector<double>& theta, Rng& rng,
                               int max_attempts = 200);

// Applies a pure-braid word through the conjugacy-tuple action; side
// lengths and closure are preserved. Throws NotPure when the word's
// underlying permutation is nontrivial or contains non-braid tokens.
SphericalPolygon pure_braid_act(const SphericalPolygon& p, const GroupWord& w);

// Polygons as points of X(theta) compare equal up to proper rotation,
// i.e. simultaneous conjugation of the vertex tuple; with the leading
// identity pinned, (zeta, sheet) of the vertex tuple is a complete
// invariant for that.
EquivalenceResult polygon_equivalent(const SphericalPolygon& p1,
                                     const SphericalPolygon& p2);

struct PolygonPureOptions {
  int polygon_count = 100;
  std::uint64_t seed = 1;
  double side_tol = 1e-10;
  double closure_tol = 1e-9;
};

// Harness: sampled closed polygons, random pure-braid words, sides and
// closure preserved at tolerance.
CheckReport verify_polygon_pure(const PolygonPureOptions& opts);

}  // namespace su2cosets

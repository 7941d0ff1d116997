#pragma once

#include <vector>

#include "su2cosets/quaternion.hpp"

namespace su2cosets {

// Ordered n-tuple (g_1, ..., g_n) of SU(2) elements representing a point
// of the double-coset space Pi(n) = K \ SU(2)^n / K. Two tuples represent
// the same point when they differ by a simultaneous left and right
// translation (h g_1 q, ..., h g_n q).
class CosetTuple {
 public:
  explicit CosetTuple(std::vector<UnitQuaternion> elements);

  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<UnitQuaternion>& elements() const { return elements_; }
  const UnitQuaternion& operator[](int i) const { return elements_[i]; }

  // True iff elements[0] is the identity within 1e-12 componentwise.
  bool normalized() const { return normalized_; }

 private:
  std::vector<UnitQuaternion> elements_;
  bool normalized_;
};

// Representative (1, g_1^-1 g_2, ..., g_1^-1 g_n) of the same double
// coset. Already-normalized tuples are returned unchanged.
CosetTuple normalize_leading(const CosetTuple& t);

// Elementwise left/right translation (h g_j q); stays in the same coset
// only when applied through the quotient, used mostly by tests and the
// equivalence machinery.
CosetTuple left_right_translate(const CosetTuple& t, const UnitQuaternion& h,
                                const UnitQuaternion& q);

// Elementwise matrix transpose. Exchanges the two sheets over a rank-4
// spectral form and fixes rank <= 3 tuples up to coset.
CosetTuple transpose_elementwise(const CosetTuple& t);

double max_componentwise_distance(const CosetTuple& t1, const CosetTuple& t2);

}  // namespace su2cosets

#include "su2cosets/tuple.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace su2cosets {

namespace {

bool is_identity(const UnitQuaternion& g, double tol) {
  return std::fabs(g.a_re - 1.0) <= tol && std::fabs(g.a_im) <= tol &&
         std::fabs(g.b_re) <= tol && std::fabs(g.b_im) <= tol;
}

}  // namespace

CosetTuple::CosetTuple(std::vector<UnitQuaternion> elements)
    : elements_(std::move(elements)) {
  if (elements_.size() < 2) {
    throw std::invalid_argument("CosetTuple requires n >= 2");
  }
  normalized_ = is_identity(elements_.front(), kUnitNormTol);
}

CosetTuple normalize_leading(const CosetTuple& t) {
  if (t.normalized() && is_identity(t[0], 0.0)) {
    return t;  // bitwise no-op for exactly normalized input
  }
  const UnitQuaternion g1_inv = inverse(t[0]);
  std::vector<UnitQuaternion> out;
  out.reserve(t.size());
  out.push_back(UnitQuaternion::identity());
  for (int j = 1; j < t.size(); ++j) {
    out.push_back(compose(g1_inv, t[j]));
  }
  return CosetTuple(std::move(out));
}

CosetTuple left_right_translate(const CosetTuple& t, const UnitQuaternion& h,
                                const UnitQuaternion& q) {
  std::vector<UnitQuaternion> out;
  out.reserve(t.size());
  for (const auto& g : t.elements()) {
    out.push_back(compose(compose(h, g), q));
  }
  return CosetTuple(std::move(out));
}

CosetTuple transpose_elementwise(const CosetTuple& t) {
  std::vector<UnitQuaternion> out;
  out.reserve(t.size());
  for (const auto& g : t.elements()) {
    out.push_back(transpose(g));
  }
  return CosetTuple(std::move(out));
}

double max_componentwise_distance(const CosetTuple& t1, const CosetTuple& t2) {
  if (t1.size() != t2.size()) {
    throw std::invalid_argument("tuple sizes differ");
  }
  double m = 0.0;
  for (int j = 0; j < t1.size(); ++j) {
    const auto v1 = t1[j].vec();
    const auto v2 = t2[j].vec();
    for (int c = 0; c < 4; ++c) {
      m = std::max(m, std::fabs(v1[c] - v2[c]));
    }
  }
  return m;
}

}  // namespace su2cosets

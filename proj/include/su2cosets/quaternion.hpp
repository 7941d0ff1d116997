#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "su2cosets/rng.hpp"

namespace su2cosets {

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kArccosClampTol = 1e-12;

// Element of SU(2) stored as the four real components of its first row
// (a, b); the encoded matrix is ((a, b), (-conj b, conj a)), which has
// determinant 1 by construction. Equivalently a unit quaternion, i.e. a
// point of S^3 in R^4 with coordinates (a_re, a_im, b_re, b_im).
struct UnitQuaternion {
  double a_re = 1.0;
  double a_im = 0.0;
  double b_re = 0.0;
  double b_im = 0.0;

  static UnitQuaternion identity() { return {}; }

  // Builds from raw components and renormalizes to unit length.
  static UnitQuaternion from_components(double ar, double ai, double br,
                                        double bi) {
    const double n =
        std::sqrt(ar * ar + ai * ai + br * br + bi * bi);
    if (!(n > 1e-14)) {
      throw std::invalid_argument("UnitQuaternion: zero-length components");
    }
    return UnitQuaternion{ar / n, ai / n, br / n, bi / n};
  }

  double norm_sq() const {
    return a_re * a_re + a_im * a_im + b_re * b_re + b_im * b_im;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  // Coordinates as a point of S^3 in R^4.
  std::array<double, 4> vec() const { return {a_re, a_im, b_re, b_im}; }

  bool is_unit(double tol = kUnitNormTol) const {
    return std::fabs(norm_sq() - 1.0) <= 2.0 * tol;
  }
};

// R^4 dot product; equals Re(a_g conj(a_h) + b_g conj(b_h)).
inline double inner(const UnitQuaternion& g, const UnitQuaternion& h) {
  return g.a_re * h.a_re + g.a_im * h.a_im + g.b_re * h.b_re +
         g.b_im * h.b_im;
}

namespace detail {
inline double clamped_acos(double x) {
  if (x > 1.0) {
    if (x > 1.0 + kArccosClampTol) {
      throw std::logic_error("acos argument overshoots 1 beyond tolerance");
    }
    x = 1.0;
  } else if (x < -1.0) {
    if (x < -1.0 - kArccosClampTol) {
      throw std::logic_error("acos argument overshoots -1 beyond tolerance");
    }
    x = -1.0;
  }
  return std::acos(x);
}
}  // namespace detail

// Matrix product g.h, renormalized to unit length. This is the only
// operation that renormalizes; the remaining ones are norm-preserving in
// exact arithmetic.
inline UnitQuaternion compose(const UnitQuaternion& g,
                              const UnitQuaternion& h) {
  const double ar = g.a_re * h.a_re - g.a_im * h.a_im - g.b_re * h.b_re -
                    g.b_im * h.b_im;
  const double ai = g.a_re * h.a_im + g.a_im * h.a_re + g.b_re * h.b_im -
                    g.b_im * h.b_re;
  const double br = g.a_re * h.b_re - g.a_im * h.b_im + g.b_re * h.a_re +
                    g.b_im * h.a_im;
  const double bi = g.a_re * h.b_im + g.a_im * h.b_re - g.b_re * h.a_im +
                    g.b_im * h.a_re;
  return UnitQuaternion::from_components(ar, ai, br, bi);
}

// Group inverse, (conj a, -b).
inline UnitQuaternion inverse(const UnitQuaternion& g) {
  return UnitQuaternion{g.a_re, -g.a_im, -g.b_re, -g.b_im};
}

// Matrix transpose, (a, -conj b); in R^4 this is the reflection negating
// the b_re coordinate.
inline UnitQuaternion transpose(const UnitQuaternion& g) {
  return UnitQuaternion{g.a_re, g.a_im, -g.b_re, g.b_im};
}

// conjugate(g, h) = h g h^-1.
inline UnitQuaternion conjugate(const UnitQuaternion& g,
                                const UnitQuaternion& h) {
  return compose(compose(h, g), inverse(h));
}

// Angle phi in [0, pi] with eigenvalues e^{+-i phi}; trace(g) = 2 cos phi.
inline double eigen_angle(const UnitQuaternion& g) {
  return detail::clamped_acos(g.a_re);
}

// Angular (geodesic) distance on S^3, in [0, pi].
inline double angular_distance(const UnitQuaternion& g,
                               const UnitQuaternion& h) {
  return detail::clamped_acos(inner(g, h));
}

// Uniform (Haar) sample: four i.i.d. standard normals normalized to unit
// length, which is exactly rotation-invariant in distribution.
inline UnitQuaternion haar_sample(Rng& rng) {
  for (;;) {
    const double x0 = rng.normal();
    const double x1 = rng.normal();
    const double x2 = rng.normal();
    const double x3 = rng.normal();
    const double n2 = x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3;
    if (n2 > 1e-24) {
      const double inv = 1.0 / std::sqrt(n2);
      return UnitQuaternion{x0 * inv, x1 * inv, x2 * inv, x3 * inv};
    }
  }
}

inline bool approx_equal(const UnitQuaternion& g, const UnitQuaternion& h,
                         double tol) {
  return std::fabs(g.a_re - h.a_re) <= tol &&
         std::fabs(g.a_im - h.a_im) <= tol &&
         std::fabs(g.b_re - h.b_re) <= tol &&
         std::fabs(g.b_im - h.b_im) <= tol;
}

}  // namespace su2cosets

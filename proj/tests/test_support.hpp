#pragma once

// Shared helpers for the test suites: independent oracles and random data
// generators. Everything here stays independent of the library paths it
// checks (the spectral form oracle goes through complex 2x2 determinants,
// not through inner products).

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "su2cosets/haar.hpp"
#include "su2cosets/quaternion.hpp"
#include "su2cosets/rng.hpp"
#include "su2cosets/tuple.hpp"

namespace test_support {

namespace sc = su2cosets;

inline std::complex<double> a_of(const sc::UnitQuaternion& g) {
  return {g.a_re, g.a_im};
}
inline std::complex<double> b_of(const sc::UnitQuaternion& g) {
  return {g.b_re, g.b_im};
}

// det of lam_i g_i + lam_j g_j through the explicit 2x2 complex matrix.
inline double det_pair(const sc::UnitQuaternion& gi,
                       const sc::UnitQuaternion& gj, double li, double lj) {
  const std::complex<double> a = li * a_of(gi) + lj * a_of(gj);
  const std::complex<double> b = li * b_of(gi) + lj * b_of(gj);
  const std::complex<double> c =
      -std::conj(li * b_of(gi) + lj * b_of(gj));
  const std::complex<double> d = std::conj(li * a_of(gi) + lj * a_of(gj));
  return (a * d - b * c).real();
}

// Oracle for the spectral form: polarization of the determinant quadratic,
// s_ij = (Q(e_i + e_j) - Q(e_i - e_j)) / 4.
inline double zeta_entry_by_determinant(const sc::CosetTuple& t, int i,
                                        int j) {
  return 0.25 * (det_pair(t[i], t[j], 1.0, 1.0) -
                 det_pair(t[i], t[j], 1.0, -1.0));
}

// Random tuple whose configuration lies in the b_im = 0 hyperplane, so its
// spectral form has rank <= 3.
inline sc::CosetTuple random_rank3_tuple(int n, sc::Rng& rng) {
  std::vector<sc::UnitQuaternion> els;
  els.reserve(n);
  for (int k = 0; k < n; ++k) {
    els.push_back(sc::UnitQuaternion::from_components(
        rng.normal(), rng.normal(), rng.normal(), 0.0));
  }
  return sc::CosetTuple(std::move(els));
}

inline sc::UnitQuaternion diag_element(double phi) {
  return sc::UnitQuaternion{std::cos(phi), std::sin(phi), 0.0, 0.0};
}

// One-sample Kolmogorov-Smirnov statistic against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// CDF of the eigen-angle law (2/pi) sin^2(phi) on [0, pi].
inline double eigen_angle_cdf(double phi) {
  return (phi - std::sin(phi) * std::cos(phi)) / 3.141592653589793;
}

}  // namespace test_support

#pragma once

#include <string>
#include <vector>

#include "su2cosets/spectral_form.hpp"
#include "su2cosets/tuple.hpp"

namespace su2cosets {

// Result of reducing a tuple to the canonical shape
// (1, diag(e^{i phi}, e^{-i phi}), g_3, ...) with phi in [0, pi] and the
// b-component of g_3 real and nonnegative. For degenerate inputs the
// Prop-3.1 pattern is unobtainable; a deterministic fallback representative
// is returned with `degenerate` set and the indices actually used recorded.
struct CanonicalizeResult {
  CosetTuple tuple;
  bool degenerate = false;
  int anchor_index = -1;  // element brought to diagonal form (1-based slot 2 is index 1)
  int phase_index = -1;   // element whose b was made real >= 0
  std::string note;
};

CanonicalizeResult canonicalize(const CosetTuple& t);

// Coordinates of a canonical tuple: phi plus (x_j, y_j, theta_j) for each
// of the n-2 elements after the diagonal one, where a_j = x_j + i y_j and
// b_j = e^{i theta_j} sqrt(1 - x_j^2 - y_j^2). Only theta differences are
// coset-meaningful; theta[0] = 0 is the gauge used throughout.
struct CanonicalCoordinates {
  double phi = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> theta;
  int count() const { return static_cast<int>(x.size()); }
};

// Throws DegenerateTuple when some x_j^2 + y_j^2 = 1 within 1e-12 (theta_j
// undefined). Requires the input to be canonical (second element diagonal).
CanonicalCoordinates to_coordinates(const CosetTuple& canonical);

CosetTuple from_coordinates(const CanonicalCoordinates& c);

// Inverse coordinate map on forms: phi = arccos p, x_j = q_j,
// y_j = (r_j - q_j p)/sqrt(1 - p^2), |theta_i - theta_j| from the
// determinant-ratio formula. `signs` has one entry per free element;
// signs[0] is ignored (theta_1 = 0 gauge) and signs[j] picks the sign of
// theta_j. Throws InconsistentSigns when the chosen signs violate pairwise
// consistency beyond 1e-8 and DegenerateTuple when 1 - p^2 <= 1e-12 or a
// 3x3 determinant under a square root is not positive beyond 1e-12.
CanonicalCoordinates coordinates_from_form(const SpectralForm& f,
                                           const std::vector<int>& signs);

// Sheet-resolved coordinates of a rank-4 form: magnitudes from the
// determinant-ratio formula, global sign chosen so the configuration's
// orientation matches `sheet`, remaining signs by pairwise consistency.
// Used by the closed-form group actions to drive the paper's sign rule.
CanonicalCoordinates resolve_coordinates(const SpectralForm& f, int sheet);

}  // namespace su2cosets

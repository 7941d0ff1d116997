#pragma once

#include <optional>
#include <vector>

#include "su2cosets/spectral_form.hpp"

namespace su2cosets {

struct QuadraticRoots {
  double lower = 0.0;
  double upper = 0.0;
  // Leading coefficient vanished (rank-deficient context); the single root
  // is returned in both slots.
  bool degenerate_linear = false;
};

// Solves det(minor) = 0 as a quadratic in the unknown entry s_ij, where the
// minor is taken on rows/columns {0, 1, 2, i, j} (0-based) and the current
// value of f(i, j) is ignored. Requires i, j >= 3. Roots are returned in
// ascending order. Throws ComplexRoots when the discriminant is below
// -1e-9 (inconsistent partial data) and DegenerateQuadratic when both the
// quadratic and linear coefficients vanish.
QuadraticRoots solve_minor_quadratic(const SpectralForm& f, int i, int j);

// Root-branch requests for complete_form, one per filled pair in fill
// order (i-major over 4 <= i < j); -1 selects automatically by rank.
using BranchChoices = std::vector<int>;

// Fills every entry s_ij with i, j >= 4 from the first four rows by
// repeated minor quadratics, selecting at each pair the root minimizing
// the 5th eigenvalue of the grown {0,1,2,3,i,j} submatrix. When both roots
// keep that submatrix at rank <= 4 the completion genuinely branches and
// an explicit choice is required (AmbiguousBranch otherwise). The final
// matrix is validated (InconsistentCompletion on failure). Entries of the
// input with both indices >= 4 are ignored.
SpectralForm complete_form(const SpectralForm& first_rows,
                           const std::optional<BranchChoices>& branches = {});

}  // namespace su2cosets

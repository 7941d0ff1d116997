#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "su2cosets/tuple.hpp"

namespace su2cosets {

// Eigenvalue cutoff for PSD / rank decisions; Gram noise grows with the
// dimension, so the threshold scales with n.
inline double rank_eig_threshold(int n) { return 1e-9 * n; }

// Symmetric n x n matrix of inner products s_ij with unit diagonal. For a
// tuple of points on S^3 this is its Gram matrix; the valid set (unit
// diagonal, PSD, rank <= 4) is exactly the image of the spectral-form map.
class SpectralForm {
 public:
  // Requires a symmetric matrix with diagonal 1 within 1e-12 and entries
  // bounded by 1 + 1e-12; the diagonal is snapped to exactly 1. PSD and
  // rank are contract-level invariants checked by validate_form, not here.
  explicit SpectralForm(Eigen::MatrixXd s);

  // Builds from the strict upper triangle in row-major order
  // (s_12, s_13, ..., s_1n, s_23, ...).
  static SpectralForm from_upper(int n, const std::vector<double>& upper);

  int size() const { return n_; }
  double operator()(int i, int j) const { return s_(i, j); }
  const Eigen::MatrixXd& matrix() const { return s_; }

  std::vector<double> upper() const;

  double max_entry_distance(const SpectralForm& other) const;

 private:
  int n_;
  Eigen::MatrixXd s_;
};

// A spectral form plus the sheet label resolving the two-point preimage of
// rank-4 forms; sheet 0 marks numerical rank <= 3.
struct SheetedForm {
  SpectralForm form;
  int sheet = 0;
};

struct ValidationReport {
  int n = 0;
  double min_eigenvalue = 0.0;    // PSD margin
  double fifth_eigenvalue = 0.0;  // rank-4 margin (0 when n <= 4)
  double max_diag_deviation = 0.0;
  double max_abs_entry = 0.0;
  int rank = 0;
  bool psd_ok = false;
  bool rank_ok = false;
  bool diag_ok = false;
  bool entries_ok = false;
  bool pass = false;
  std::string summary() const;
};

// The spectral-form map zeta: s_ij = inner(g_i, g_j).
SpectralForm spectral_form(const CosetTuple& t);

// Eigenvalue count above the scaled threshold.
int numerical_rank(const SpectralForm& f);

// Sheet label of a tuple: 0 when the R^4 vectors span <= 3 dimensions,
// otherwise the sign of det[v_j1 .. v_j4] over the lexicographically first
// linearly independent quadruple. Invariant under simultaneous left/right
// translation, negated by elementwise transpose.
int sheet(const CosetTuple& t);

SheetedForm sheeted_form(const CosetTuple& t);

ValidationReport validate_form(const SpectralForm& f);

// Inverse of (zeta, sheet): eigendecomposes the form, realizes the top
// <= 4 eigenpairs as unit vectors in R^4, maps them to SU(2) via
// a = v1 + i v2, b = v3 + i v4, and reflects the fourth coordinate when
// the orientation disagrees with the requested sheet.
// Throws InvalidForm when validation fails and RankAmbiguous when the 4th
// and 5th eigenvalues both fall inside the rank-decision band.
CosetTuple reconstruct(const SheetedForm& sf);

struct EquivalenceResult {
  bool equivalent = false;
  // Set when the zeta distance lands in (1e-8, 1e-6): ambiguous at
  // tolerance.
  bool borderline = false;
  double zeta_distance = 0.0;
  bool sheets_equal = false;
  explicit operator bool() const { return equivalent; }
};

// Decides double-coset equality via the complete invariant (zeta, sheet).
EquivalenceResult equivalent(const CosetTuple& t1, const CosetTuple& t2);

}  // namespace su2cosets

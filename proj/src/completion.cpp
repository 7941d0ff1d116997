#include "su2cosets/completion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <utility>

#include "su2cosets/errors.hpp"

namespace su2cosets {

namespace {

constexpr double kLeadingCoeffTol = 1e-10;
constexpr double kDiscriminantTol = 1e-9;

// Quadratic coefficients of det(M(x)) in the unknown x at positions (3,4)
// and (4,3) of the 5x5 minor, recovered by evaluating at x = 0, 1, -1.
QuadraticRoots solve_minor_quadratic_mat(const Eigen::MatrixXd& s, int i,
                                         int j) {
  const int n = static_cast<int>(s.rows());
  if (i > j) std::swap(i, j);
  if (i < 3 || j >= n || i == j) {
    throw CosetError(Errc::index_error,
                     "solve_minor_quadratic requires 3 <= i < j < n");
  }
  const int idx[5] = {0, 1, 2, i, j};
  Eigen::Matrix<double, 5, 5> m;
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) {
      m(r, c) = s(idx[r], idx[c]);
    }
  }
  auto det_at = [&m](double x) {
    m(3, 4) = m(4, 3) = x;
    return m.determinant();
  };
  const double d0 = det_at(0.0);
  const double dp = det_at(1.0);
  const double dm = det_at(-1.0);
  const double a = 0.5 * (dp + dm) - d0;
  const double b = 0.5 * (dp - dm);
  const double c = d0;

  QuadraticRoots out;
  if (std::fabs(a) <= kLeadingCoeffTol) {
    if (std::fabs(b) <= kLeadingCoeffTol) {
      throw CosetError(Errc::degenerate_quadratic,
                       "both leading coefficients vanish");
    }
    out.lower = out.upper = -c / b;
    out.degenerate_linear = true;
    return out;
  }
  double disc = b * b - 4.0 * a * c;
  if (disc < -kDiscriminantTol) {
    throw CosetError(Errc::complex_roots,
                     "negative discriminant: inconsistent partial data");
  }
  disc = std::max(disc, 0.0);
  const double sq = std::sqrt(disc);
  // Citardauq on the large-magnitude side for stability.
  const double qq = -0.5 * (b + (b >= 0 ? sq : -sq));
  double r1 = qq / a;
  double r2 = (std::fabs(qq) > 0.0) ? c / qq : r1;
  if (r1 > r2) std::swap(r1, r2);
  out.lower = r1;
  out.upper = r2;
  return out;
}

double fifth_eigenvalue_6(const Eigen::Matrix<double, 6, 6>& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> es(
      m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(1);  // ascending: index 1 is the 5th largest
}

}  // namespace

QuadraticRoots solve_minor_quadratic(const SpectralForm& f, int i, int j) {
  return solve_minor_quadratic_mat(f.matrix(), i, j);
}

SpectralForm complete_form(const SpectralForm& first_rows,
                           const std::optional<BranchChoices>& branches) {
  const int n = first_rows.size();
  if (n <= 5) {
    // Every entry already lies in the first four rows.
    return first_rows;
  }
  Eigen::MatrixXd s = first_rows.matrix();
  const double cut6 = rank_eig_threshold(6);

  int pair_index = 0;
  for (int i = 4; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++pair_index) {
      const QuadraticRoots roots = solve_minor_quadratic_mat(s, i, j);
      const int sub[6] = {0, 1, 2, 3, i, j};
      Eigen::Matrix<double, 6, 6> m6;
      for (int r = 0; r < 6; ++r) {
        for (int c = 0; c < 6; ++c) {
          m6(r, c) = s(sub[r], sub[c]);
        }
      }
      auto fifth_for = [&](double x) {
        m6(4, 5) = m6(5, 4) = x;
        return fifth_eigenvalue_6(m6);
      };
      double chosen;
      if (roots.degenerate_linear) {
        chosen = roots.lower;
      } else {
        const double e_lo = fifth_for(roots.lower);
        const double e_hi = fifth_for(roots.upper);
        int request = -1;
        if (branches && pair_index < static_cast<int>(branches->size())) {
          request = (*branches)[pair_index];
        }
        if (request == 0) {
          chosen = roots.lower;
        } else if (request == 1) {
          chosen = roots.upper;
        } else if (e_lo <= cut6 && e_hi <= cut6 &&
                   std::fabs(roots.upper - roots.lower) > 1e-7) {
          // Both roots rank-consistent: the completion genuinely branches
          // and the caller must decide.
          throw CosetError(Errc::ambiguous_branch,
                           "both quadratic roots keep rank <= 4; pass an "
                           "explicit branch choice");
        } else {
          chosen = e_lo <= e_hi ? roots.lower : roots.upper;
        }
      }
      if (std::fabs(chosen) > 1.0) {
        if (std::fabs(chosen) > 1.0 + 1e-9) {
          throw CosetError(Errc::inconsistent_completion,
                           "completed entry exceeds 1 in magnitude");
        }
        chosen = chosen > 0 ? 1.0 : -1.0;
      }
      s(i, j) = s(j, i) = chosen;
    }
  }

  SpectralForm out{std::move(s)};
  const ValidationReport rep = validate_form(out);
  if (!rep.pass) {
    throw CosetError(Errc::inconsistent_completion,
                     "completed form fails validation: " + rep.summary());
  }
  return out;
}

}  // namespace su2cosets

#include "su2cosets/spectral_form.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "su2cosets/errors.hpp"

namespace su2cosets {

namespace {

constexpr double kEntryBoundTol = 1e-12;

Eigen::VectorXd eigenvalues_desc(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s,
                                                    Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();  // ascending
  return ev.reverse();
}

// Columns of the configuration matrix: v_j = R^4 coordinates of g_j.
Eigen::Matrix<double, 4, Eigen::Dynamic> configuration(const CosetTuple& t) {
  Eigen::Matrix<double, 4, Eigen::Dynamic> v(4, t.size());
  for (int j = 0; j < t.size(); ++j) {
    const auto c = t[j].vec();
    v.col(j) << c[0], c[1], c[2], c[3];
  }
  return v;
}

}  // namespace

SpectralForm::SpectralForm(Eigen::MatrixXd s) : n_(static_cast<int>(s.rows())) {
  if (s.rows() != s.cols() || n_ < 2) {
    throw CosetError(Errc::invalid_form, "matrix must be square with n >= 2");
  }
  for (int i = 0; i < n_; ++i) {
    if (std::fabs(s(i, i) - 1.0) > kEntryBoundTol) {
      throw CosetError(Errc::invalid_form, "diagonal entry deviates from 1");
    }
    s(i, i) = 1.0;
    for (int j = i + 1; j < n_; ++j) {
      if (std::fabs(s(i, j) - s(j, i)) > kEntryBoundTol) {
        throw CosetError(Errc::invalid_form, "matrix is not symmetric");
      }
      const double avg = 0.5 * (s(i, j) + s(j, i));
      if (std::fabs(avg) > 1.0 + kEntryBoundTol) {
        throw CosetError(Errc::invalid_form, "entry exceeds 1 in magnitude");
      }
      s(i, j) = s(j, i) = avg;
    }
  }
  s_ = std::move(s);
}

SpectralForm SpectralForm::from_upper(int n, const std::vector<double>& upper) {
  if (n < 2 || static_cast<int>(upper.size()) != n * (n - 1) / 2) {
    throw CosetError(Errc::invalid_form, "upper triangle has wrong length");
  }
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(n, n);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      s(i, j) = s(j, i) = upper[k++];
    }
  }
  return SpectralForm(std::move(s));
}

std::vector<double> SpectralForm::upper() const {
  std::vector<double> out;
  out.reserve(n_ * (n_ - 1) / 2);
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      out.push_back(s_(i, j));
    }
  }
  return out;
}

double SpectralForm::max_entry_distance(const SpectralForm& other) const {
  if (other.n_ != n_) {
    throw CosetError(Errc::invalid_form, "form sizes differ");
  }
  return (s_ - other.s_).cwiseAbs().maxCoeff();
}

SpectralForm spectral_form(const CosetTuple& t) {
  const int n = t.size();
  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i) {
    s(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      s(i, j) = s(j, i) = inner(t[i], t[j]);
    }
  }
  return SpectralForm(std::move(s));
}

int numerical_rank(const SpectralForm& f) {
  const Eigen::VectorXd ev = eigenvalues_desc(f.matrix());
  const double cut = rank_eig_threshold(f.size());
  int r = 0;
  while (r < ev.size() && ev(r) > cut) ++r;
  return r;
}

int sheet(const CosetTuple& t) {
  const SpectralForm f = spectral_form(t);
  if (numerical_rank(f) <= 3) return 0;

  // Lexicographically first linearly independent quadruple via greedy
  // Gram-Schmidt; rank 4 is already established, so the residual threshold
  // only guards exact ties.
  const auto v = configuration(t);
  Eigen::Matrix<double, 4, 4> basis;
  int picked[4];
  int count = 0;
  for (int j = 0; j < t.size() && count < 4; ++j) {
    Eigen::Vector4d w = v.col(j);
    for (int b = 0; b < count; ++b) {
      w -= basis.col(b).dot(w) * basis.col(b);
    }
    const double res = w.squaredNorm();
    if (res > 1e-16) {
      basis.col(count) = w / std::sqrt(res);
      picked[count] = j;
      ++count;
    }
  }
  if (count < 4) return 0;  // borderline rank; treat as the branch surface

  Eigen::Matrix4d m;
  for (int c = 0; c < 4; ++c) {
    m.col(c) = v.col(picked[c]);
  }
  const double det = m.determinant();
  if (std::fabs(det) < 1e-15) return 0;
  return det > 0 ? 1 : -1;
}

SheetedForm sheeted_form(const CosetTuple& t) {
  return SheetedForm{spectral_form(t), sheet(t)};
}

ValidationReport validate_form(const SpectralForm& f) {
  ValidationReport rep;
  rep.n = f.size();
  const Eigen::VectorXd ev = eigenvalues_desc(f.matrix());
  const double cut = rank_eig_threshold(f.size());
  rep.min_eigenvalue = ev(ev.size() - 1);
  rep.fifth_eigenvalue = f.size() >= 5 ? ev(4) : 0.0;
  rep.max_diag_deviation =
      (f.matrix().diagonal().array() - 1.0).abs().maxCoeff();
  rep.max_abs_entry = f.matrix().cwiseAbs().maxCoeff();
  int r = 0;
  while (r < ev.size() && ev(r) > cut) ++r;
  rep.rank = r;
  rep.psd_ok = rep.min_eigenvalue >= -cut;
  rep.rank_ok = rep.fifth_eigenvalue <= cut;
  rep.diag_ok = rep.max_diag_deviation <= kEntryBoundTol;
  rep.entries_ok = rep.max_abs_entry <= 1.0 + kEntryBoundTol;
  rep.pass = rep.psd_ok && rep.rank_ok && rep.diag_ok && rep.entries_ok;
  return rep;
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (pass ? "pass" : "fail") << " (n=" << n << ", rank=" << rank
     << ", min_eig=" << min_eigenvalue << ", fifth_eig=" << fifth_eigenvalue
     << ")";
  return os.str();
}

CosetTuple reconstruct(const SheetedForm& sf) {
  const SpectralForm& f = sf.form;
  const int n = f.size();
  const ValidationReport rep = validate_form(f);
  if (!rep.pass) {
    throw CosetError(Errc::invalid_form, "reconstruct: " + rep.summary());
  }
  const double cut = rank_eig_threshold(n);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.matrix());
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  const Eigen::MatrixXd& u = es.eigenvectors();

  if (n >= 5) {
    // Rank-decision band: both the 4th and 5th eigenvalues of ambiguous
    // magnitude means the rank-4 call itself is unstable.
    const double e4 = ev(n - 4);
    const double e5 = ev(n - 5);
    const bool e4_in_band = e4 > cut / 10 && e4 < cut * 10;
    const bool e5_in_band = e5 > cut / 10 && e5 < cut * 10;
    if (e4_in_band && e5_in_band) {
      throw CosetError(Errc::rank_ambiguous,
                       "4th and 5th eigenvalues inside the threshold band");
    }
  }
  if (sf.sheet != 0 && rep.rank <= 3) {
    throw CosetError(Errc::invalid_form,
                     "sheet label nonzero but numerical rank <= 3");
  }

  // v_j = row j of U sqrt(Lambda) over the top <= 4 eigenpairs.
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, 4);
  const int take = std::min(4, n);
  for (int c = 0; c < take; ++c) {
    const int src = n - 1 - c;  // descending order
    const double lam = std::max(ev(src), 0.0);
    v.col(c) = u.col(src) * std::sqrt(lam);
  }
  for (int j = 0; j < n; ++j) {
    v.row(j).normalize();
  }

  auto build = [&](bool flip) {
    std::vector<UnitQuaternion> els;
    els.reserve(n);
    for (int j = 0; j < n; ++j) {
      els.push_back(UnitQuaternion::from_components(
          v(j, 0), v(j, 1), v(j, 2), flip ? -v(j, 3) : v(j, 3)));
    }
    return CosetTuple(std::move(els));
  };

  CosetTuple out = build(false);
  if (sf.sheet != 0 && sheet(out) != sf.sheet) {
    out = build(true);
  }
  return out;
}

EquivalenceResult equivalent(const CosetTuple& t1, const CosetTuple& t2) {
  if (t1.size() != t2.size()) {
    throw std::invalid_argument("equivalent: tuple sizes differ");
  }
  EquivalenceResult res;
  res.zeta_distance = spectral_form(t1).max_entry_distance(spectral_form(t2));
  res.sheets_equal = sheet(t1) == sheet(t2);
  res.equivalent = res.zeta_distance <= 1e-8 && res.sheets_equal;
  res.borderline = res.zeta_distance > 1e-8 && res.zeta_distance < 1e-6;
  return res;
}

}  // namespace su2cosets

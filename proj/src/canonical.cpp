#include "su2cosets/canonical.hpp"

#include <cmath>
#include <complex>
#include <utility>

#include "su2cosets/errors.hpp"

namespace su2cosets {

namespace {

constexpr double kCentralTol = 1e-10;
constexpr double kPhaseTol = 1e-10;

// Distance of g from the center {+-1}: the norm of its quaternion vector
// part, sin(eigen_angle).
double vector_part_norm(const UnitQuaternion& g) {
  return std::sqrt(g.a_im * g.a_im + g.b_re * g.b_re + g.b_im * g.b_im);
}

double b_abs(const UnitQuaternion& g) {
  return std::sqrt(g.b_re * g.b_re + g.b_im * g.b_im);
}

// h in SU(2) with h g h^-1 = diag(e^{i phi}, e^{-i phi}), phi in [0, pi].
// Of the two eigenvector expressions (b, i(sin - a_im)) and
// (-i(sin + a_im), conj b), at least one has norm >= sqrt(2) sin(phi), so
// pick the better conditioned.
UnitQuaternion diagonalizer(const UnitQuaternion& g) {
  const double s = std::sqrt(
      std::max(0.0, g.a_im * g.a_im + g.b_re * g.b_re + g.b_im * g.b_im));
  const std::complex<double> b(g.b_re, g.b_im);
  std::complex<double> u1, u2;
  const double n1sq = std::norm(b) + (s - g.a_im) * (s - g.a_im);
  const double n2sq = (s + g.a_im) * (s + g.a_im) + std::norm(b);
  if (n1sq >= n2sq) {
    u1 = b;
    u2 = std::complex<double>(0.0, s - g.a_im);
  } else {
    u1 = std::complex<double>(0.0, -(s + g.a_im));
    u2 = std::conj(b);
  }
  const double nn = std::sqrt(std::norm(u1) + std::norm(u2));
  u1 /= nn;
  u2 /= nn;
  // V = ((u1, -conj u2), (u2, conj u1)); columns are the e^{+i phi} and
  // e^{-i phi} eigenvectors. h = V^-1.
  const UnitQuaternion v = UnitQuaternion::from_components(
      u1.real(), u1.imag(), -u2.real(), u2.imag());
  return inverse(v);
}

// Multiplies the b-component of every element by the unit complex w; this
// is conjugation by a diagonal torus element with u^2 = w.
std::vector<UnitQuaternion> rotate_b_phases(
    const std::vector<UnitQuaternion>& els, double w_re, double w_im) {
  std::vector<UnitQuaternion> out;
  out.reserve(els.size());
  for (const auto& g : els) {
    out.push_back(UnitQuaternion{g.a_re, g.a_im,
                                 w_re * g.b_re - w_im * g.b_im,
                                 w_re * g.b_im + w_im * g.b_re});
  }
  return out;
}

double det3(double a11, double a12, double a13, double a21, double a22,
            double a23, double a31, double a32, double a33) {
  return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
         a13 * (a21 * a32 - a22 * a31);
}

// Pairwise cos(theta_i - theta_j) from designated form entries via the
// determinant-ratio formula; d_i are the 3x3 symmetric determinants.
struct FormCoordinateData {
  double p = 0.0;
  double phi = 0.0;
  std::vector<double> x, y;
  std::vector<double> d;  // (1 - p^2)(1 - x^2 - y^2) per free column
  // cos_tbl[i][j] for i < j
  std::vector<std::vector<double>> cos_tbl;
};

FormCoordinateData form_coordinate_data(const SpectralForm& f) {
  const int n = f.size();
  if (n < 3) {
    throw CosetError(Errc::degenerate_tuple,
                     "coordinates need n >= 3");
  }
  FormCoordinateData out;
  out.p = f(0, 1);
  const double one_minus_p2 = 1.0 - out.p * out.p;
  if (one_minus_p2 <= 1e-12) {
    throw CosetError(Errc::degenerate_tuple, "1 - p^2 vanishes (p = +-1)");
  }
  out.phi = detail::clamped_acos(out.p);
  const int m = n - 2;
  out.x.resize(m);
  out.y.resize(m);
  out.d.resize(m);
  const double sq = std::sqrt(one_minus_p2);
  for (int j = 0; j < m; ++j) {
    const double qj = f(0, j + 2);
    const double rj = f(1, j + 2);
    out.x[j] = qj;
    out.y[j] = (rj - qj * out.p) / sq;
    out.d[j] = det3(1.0, out.p, qj, out.p, 1.0, rj, qj, rj, 1.0);
    if (out.d[j] <= 1e-12) {
      throw CosetError(Errc::degenerate_tuple,
                       "3x3 determinant under the radical is not positive");
    }
  }
  out.cos_tbl.assign(m, std::vector<double>(m, 1.0));
  for (int i = 0; i < m; ++i) {
    const double qi = f(0, i + 2);
    const double ri = f(1, i + 2);
    for (int j = i + 1; j < m; ++j) {
      const double qj = f(0, j + 2);
      const double rj = f(1, j + 2);
      const double t = f(i + 2, j + 2);
      const double num = det3(1.0, out.p, qi, out.p, 1.0, ri, qj, rj, t);
      double c = num / std::sqrt(out.d[i] * out.d[j]);
      if (std::fabs(c) > 1.0 + 1e-9) {
        throw CosetError(Errc::invalid_form,
                         "cos(theta_i - theta_j) outside [-1, 1]");
      }
      c = std::clamp(c, -1.0, 1.0);
      out.cos_tbl[i][j] = out.cos_tbl[j][i] = c;
    }
  }
  return out;
}

}  // namespace

CanonicalizeResult canonicalize(const CosetTuple& t) {
  CosetTuple u = normalize_leading(t);
  const int n = u.size();
  std::vector<UnitQuaternion> els = u.elements();

  CanonicalizeResult res{CosetTuple(els), false, -1, -1, {}};

  // Anchor: first non-central element, preferentially g_2.
  int anchor = -1;
  for (int j = 1; j < n; ++j) {
    if (vector_part_norm(els[j]) > kCentralTol) {
      anchor = j;
      break;
    }
  }
  if (anchor < 0) {
    res.degenerate = true;
    res.note = "all elements central; returned the tuple of signs";
    return res;
  }

  const UnitQuaternion h = diagonalizer(els[anchor]);
  const double phi = eigen_angle(els[anchor]);
  for (int j = 1; j < n; ++j) {
    els[j] = conjugate(els[j], h);
  }
  // Snap the anchor to an exact diagonal.
  els[anchor] = UnitQuaternion{std::cos(phi), std::sin(phi), 0.0, 0.0};

  // Phase reference: first element with nonvanishing b, preferentially g_3.
  int phase_ref = -1;
  for (int j = 1; j < n; ++j) {
    if (j == anchor) continue;
    if (b_abs(els[j]) > kPhaseTol) {
      phase_ref = j;
      break;
    }
  }
  if (phase_ref >= 0) {
    const double r = b_abs(els[phase_ref]);
    const double w_re = els[phase_ref].b_re / r;
    const double w_im = -els[phase_ref].b_im / r;
    els = rotate_b_phases(els, w_re, w_im);
    els[phase_ref].b_re = b_abs(els[phase_ref]);
    els[phase_ref].b_im = 0.0;
  }

  res.tuple = CosetTuple(std::move(els));
  res.anchor_index = anchor;
  res.phase_index = phase_ref;
  res.degenerate = anchor != 1 || phase_ref != 2;
  if (res.degenerate) {
    res.note = phase_ref < 0 ? "no element with b != 0; phase gauge unused"
                             : "general-position pattern of Prop-type "
                               "canonical form not met; fallback indices used";
  }
  return res;
}

CanonicalCoordinates to_coordinates(const CosetTuple& canonical) {
  const int n = canonical.size();
  if (n < 3) {
    throw std::invalid_argument("to_coordinates requires n >= 3");
  }
  const UnitQuaternion& g2 = canonical[1];
  if (b_abs(g2) > 1e-9 || g2.a_im < -1e-12) {
    throw std::invalid_argument(
        "to_coordinates requires a canonical tuple (second element "
        "diagonal with phi in [0, pi])");
  }
  CanonicalCoordinates c;
  c.phi = eigen_angle(g2);
  const int m = n - 2;
  c.x.resize(m);
  c.y.resize(m);
  c.theta.resize(m);
  for (int j = 0; j < m; ++j) {
    const UnitQuaternion& g = canonical[j + 2];
    c.x[j] = g.a_re;
    c.y[j] = g.a_im;
    const double rho2 = g.b_re * g.b_re + g.b_im * g.b_im;
    if (rho2 <= 1e-24) {
      throw CosetError(Errc::degenerate_tuple,
                       "x^2 + y^2 = 1 within tolerance; theta undefined");
    }
    c.theta[j] = std::atan2(g.b_im, g.b_re);
  }
  return c;
}

CosetTuple from_coordinates(const CanonicalCoordinates& c) {
  const int m = c.count();
  std::vector<UnitQuaternion> els;
  els.reserve(m + 2);
  els.push_back(UnitQuaternion::identity());
  els.push_back(UnitQuaternion{std::cos(c.phi), std::sin(c.phi), 0.0, 0.0});
  for (int j = 0; j < m; ++j) {
    const double rho2 = 1.0 - c.x[j] * c.x[j] - c.y[j] * c.y[j];
    if (rho2 < -1e-12) {
      throw CosetError(Errc::degenerate_tuple, "x^2 + y^2 exceeds 1");
    }
    const double rho = std::sqrt(std::max(rho2, 0.0));
    els.push_back(UnitQuaternion::from_components(
        c.x[j], c.y[j], rho * std::cos(c.theta[j]),
        rho * std::sin(c.theta[j])));
  }
  return CosetTuple(std::move(els));
}

CanonicalCoordinates coordinates_from_form(const SpectralForm& f,
                                           const std::vector<int>& signs) {
  const FormCoordinateData data = form_coordinate_data(f);
  const int m = static_cast<int>(data.x.size());
  if (static_cast<int>(signs.size()) != m) {
    throw std::invalid_argument(
        "coordinates_from_form: signs must have one entry per free element");
  }
  CanonicalCoordinates c;
  c.phi = data.phi;
  c.x = data.x;
  c.y = data.y;
  c.theta.assign(m, 0.0);
  for (int j = 1; j < m; ++j) {
    const double mag = std::acos(data.cos_tbl[0][j]);
    c.theta[j] = (signs[j] >= 0 ? 1.0 : -1.0) * mag;
  }
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (std::fabs(std::cos(c.theta[i] - c.theta[j]) - data.cos_tbl[i][j]) >
          1e-8) {
        throw CosetError(Errc::inconsistent_signs,
                         "theta differences violate pairwise consistency");
      }
    }
  }
  return c;
}

CanonicalCoordinates resolve_coordinates(const SpectralForm& f, int sheet) {
  if (sheet == 0) {
    throw CosetError(Errc::degenerate_tuple,
                     "resolve_coordinates requires a rank-4 sheet label");
  }
  const FormCoordinateData data = form_coordinate_data(f);
  const int m = static_cast<int>(data.x.size());
  CanonicalCoordinates c;
  c.phi = data.phi;
  c.x = data.x;
  c.y = data.y;
  c.theta.assign(m, 0.0);

  // In the theta_1 = 0 gauge the orientation determinant of the first
  // independent quadruple reduces to sign(sin theta_k) for the first k
  // with a resolvable phase, so that sign is the sheet.
  int first = -1;
  for (int j = 1; j < m; ++j) {
    const double mag = std::acos(data.cos_tbl[0][j]);
    if (std::sin(mag) > 1e-9) {
      first = j;
      c.theta[j] = sheet * mag;
      break;
    }
    c.theta[j] = mag;  // sin ~ 0: sign immaterial
  }
  if (first < 0) {
    throw CosetError(Errc::degenerate_tuple,
                     "all phases collinear; sheet does not resolve them");
  }
  for (int j = first + 1; j < m; ++j) {
    const double mag = std::acos(data.cos_tbl[0][j]);
    const double plus_err =
        std::fabs(std::cos(c.theta[first] - mag) - data.cos_tbl[first][j]);
    const double minus_err =
        std::fabs(std::cos(c.theta[first] + mag) - data.cos_tbl[first][j]);
    c.theta[j] = plus_err <= minus_err ? mag : -mag;
    if (std::min(plus_err, minus_err) > 1e-6) {
      throw CosetError(Errc::inconsistent_signs,
                       "no consistent sign for a theta difference");
    }
  }
  return c;
}

}  // namespace su2cosets

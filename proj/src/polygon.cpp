#include "su2cosets/polygon.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "su2cosets/errors.hpp"
#include "su2cosets/spectral_form.hpp"

namespace su2cosets {

namespace {

constexpr double kClosureTol = 1e-9;

// Rotation by angle theta about the unit axis n: cos(theta) + sin(theta) *
// (n1 i + n2 j + n3 k).
UnitQuaternion rotation(double theta, const Eigen::Vector3d& axis) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return UnitQuaternion::from_components(c, s * axis(0), s * axis(1),
                                         s * axis(2));
}

Eigen::Vector3d random_axis(Rng& rng) {
  for (;;) {
    Eigen::Vector3d v(rng.normal(), rng.normal(), rng.normal());
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

double closure_deviation(const std::vector<UnitQuaternion>& r) {
  UnitQuaternion prod = UnitQuaternion::identity();
  for (const auto& g : r) prod = compose(prod, g);
  double dev = 0.0;
  const UnitQuaternion id = UnitQuaternion::identity();
  const auto v = prod.vec();
  const auto w = id.vec();
  for (int c = 0; c < 4; ++c) dev = std::max(dev, std::fabs(v[c] - w[c]));
  // The tuple of matrices must multiply to the identity matrix itself, not
  // to -1; the componentwise comparison above enforces that.
  return dev;
}

// Tangent frame at a unit vector.
void tangent_frame(const Eigen::Vector3d& n, Eigen::Vector3d& e1,
                   Eigen::Vector3d& e2) {
  const Eigen::Vector3d probe =
      std::fabs(n(0)) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  e1 = n.cross(probe).normalized();
  e2 = n.cross(e1);
}

// Newton polish of the last two rotation axes so that
// rot(theta1, n1) * rot(theta2, n2) = target. Axes move in their tangent
// planes; the 4-component residual is solved in the least-squares sense.
bool polish_closure(double theta1, double theta2, const UnitQuaternion& target,
                    Eigen::Vector3d& n1, Eigen::Vector3d& n2) {
  const int max_iter = 50;
  const double tol = 1e-12;
  auto residual = [&](const Eigen::Vector3d& a,
                      const Eigen::Vector3d& b) -> Eigen::Vector4d {
    const UnitQuaternion prod = compose(rotation(theta1, a), rotation(theta2, b));
    return Eigen::Vector4d(prod.a_re - target.a_re, prod.a_im - target.a_im,
                           prod.b_re - target.b_re, prod.b_im - target.b_im);
  };
  for (int iter = 0; iter < max_iter; ++iter) {
    const Eigen::Vector4d f = residual(n1, n2);
    if (f.lpNorm<Eigen::Infinity>() <= tol) return true;

    Eigen::Vector3d e11, e12, e21, e22;
    tangent_frame(n1, e11, e12);
    tangent_frame(n2, e21, e22);
    const double h = 1e-7;
    Eigen::Matrix4d jac;
    jac.col(0) = (residual((n1 + h * e11).normalized(), n2) - f) / h;
    jac.col(1) = (residual((n1 + h * e12).normalized(), n2) - f) / h;
    jac.col(2) = (residual(n1, (n2 + h * e21).normalized()) - f) / h;
    jac.col(3) = (residual(n1, (n2 + h * e22).normalized()) - f) / h;

    const Eigen::Vector4d step =
        jac.colPivHouseholderQr().solve(-f);
    if (!step.allFinite()) return false;
    double scale = 1.0;
    if (step.norm() > 1.0) scale = 1.0 / step.norm();
    n1 = (n1 + scale * (step(0) * e11 + step(1) * e12)).normalized();
    n2 = (n2 + scale * (step(2) * e21 + step(3) * e22)).normalized();
  }
  return residual(n1, n2).lpNorm<Eigen::Infinity>() <= tol;
}

}  // namespace

std::vector<UnitQuaternion> SphericalPolygon::conjugacy_tuple() const {
  const int m = sides();
  std::vector<UnitQuaternion> r;
  r.reserve(m);
  for (int k = 0; k < m; ++k) {
    const UnitQuaternion& a = vertices[k];
    const UnitQuaternion& b = vertices[(k + 1) % m];
    r.push_back(compose(inverse(a), b));
  }
  return r;
}

SphericalPolygon from_conjugacy_tuple(const std::vector<UnitQuaternion>& r) {
  if (r.size() < 2) {
    throw std::invalid_argument("polygon needs at least 2 sides");
  }
  const double dev = closure_deviation(r);
  if (dev > kClosureTol) {
    std::ostringstream os;
    os << "product deviates from identity by " << dev;
    throw CosetError(Errc::not_closed, os.str());
  }
  SphericalPolygon p;
  p.vertices.reserve(r.size());
  p.side_lengths.reserve(r.size());
  UnitQuaternion acc = UnitQuaternion::identity();
  for (size_t k = 0; k < r.size(); ++k) {
    p.vertices.push_back(acc);
    p.side_lengths.push_back(eigen_angle(r[k]));
    acc = compose(acc, r[k]);
  }
  return p;
}

SphericalPolygon sample_closed(const std::vector<double>& theta, Rng& rng,
                               int max_attempts) {
  const int m = static_cast<int>(theta.size());
  if (m < 3) {
    throw std::invalid_argument("sample_closed needs at least 3 sides");
  }
  for (double th : theta) {
    if (!(th > 0.0 && th < 3.141592653589793)) {
      throw std::invalid_argument("side lengths must lie in (0, pi)");
    }
  }

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<UnitQuaternion> r(m);
    UnitQuaternion prefix = UnitQuaternion::identity();
    for (int k = 0; k < m - 2; ++k) {
      r[k] = rotation(theta[k], random_axis(rng));
      prefix = compose(prefix, r[k]);
    }
    const UnitQuaternion target = inverse(prefix);

    // Feasibility: eigen_angle(r_{m-2} r_{m-1}) ranges over
    // [|t1 - t2|, min(t1 + t2, 2 pi - t1 - t2)].
    const double t1 = theta[m - 2], t2 = theta[m - 1];
    const double psi = eigen_angle(target);
    const double lo = std::fabs(t1 - t2);
    const double hi = std::min(t1 + t2, 2.0 * 3.141592653589793 - t1 - t2);
    if (psi < lo - 1e-12 || psi > hi + 1e-12) continue;

    Eigen::Vector3d n1 = random_axis(rng);
    Eigen::Vector3d n2 = random_axis(rng);
    if (!polish_closure(t1, t2, target, n1, n2)) continue;
    r[m - 2] = rotation(t1, n1);
    r[m - 1] = rotation(t2, n2);
    if (closure_deviation(r) > kClosureTol) continue;
    return from_conjugacy_tuple(r);
  }
  throw CosetError(Errc::unsamplable,
                   "closure search budget exhausted; X(theta) may be empty");
}

SphericalPolygon pure_braid_act(const SphericalPolygon& p, const GroupWord& w) {
  for (const auto& tok : w.tokens) {
    if (!std::holds_alternative<BraidToken>(tok)) {
      throw CosetError(Errc::not_pure, "word contains a non-braid token");
    }
  }
  const int m = p.sides();
  const int n = m + 1;  // conjugacy tuple of a polygon has n - 1 entries
  const std::vector<int> perm = word_permutation(w, n);
  for (int pos = 2; pos <= n; ++pos) {
    if (perm[pos - 2] != pos) {
      throw CosetError(Errc::not_pure,
                       "word has a nontrivial underlying permutation");
    }
  }

  const std::vector<UnitQuaternion> r = p.conjugacy_tuple();
  std::vector<UnitQuaternion> els;
  els.reserve(n);
  els.push_back(UnitQuaternion::identity());
  els.insert(els.end(), r.begin(), r.end());
  const CosetTuple acted = act_tuple(CosetTuple(std::move(els)), w);
  std::vector<UnitQuaternion> r_new(acted.elements().begin() + 1,
                                    acted.elements().end());
  return from_conjugacy_tuple(r_new);
}

EquivalenceResult polygon_equivalent(const SphericalPolygon& p1,
                                     const SphericalPolygon& p2) {
  auto as_tuple = [](const SphericalPolygon& p) {
    return CosetTuple(p.vertices);
  };
  return equivalent(as_tuple(p1), as_tuple(p2));
}

CheckReport verify_polygon_pure(const PolygonPureOptions& opts) {
  CheckReport rep;
  rep.name = "pure braids preserve polygon data";
  rep.trials = opts.polygon_count;
  Rng rng(opts.seed);

  int redraws = 0;
  for (int i = 0; i < opts.polygon_count; ++i) {
    const int m = 4 + static_cast<int>(rng.next_u64() % 3);  // 4..6 sides
    std::vector<double> theta(m);
    for (int k = 0; k < m; ++k) {
      theta[k] = rng.uniform(0.4, 2.7);
    }
    SphericalPolygon p;
    try {
      p = sample_closed(theta, rng, 400);
    } catch (const CosetError&) {
      // Infeasible side lengths: draw again, within a global budget.
      if (++redraws <= 10 * opts.polygon_count) {
        --i;
      } else {
        ++rep.failures;
      }
      continue;
    }

    // Random pure-braid word: squares of generators composed.
    GroupWord w;
    const int words = 1 + static_cast<int>(rng.next_u64() % 3);
    for (int q = 0; q < words; ++q) {
      const int pos = 2 + static_cast<int>(rng.next_u64() % (m - 1));
      const int e = (rng.next_u64() & 1) ? 1 : -1;
      w.tokens.push_back(BraidToken{pos, e});
      w.tokens.push_back(BraidToken{pos, e});
    }

    bool ok = true;
    try {
      const SphericalPolygon q = pure_braid_act(p, w);
      for (int k = 0; k < m; ++k) {
        const double d = std::fabs(q.side_lengths[k] - p.side_lengths[k]);
        rep.max_error = std::max(rep.max_error, d);
        ok = ok && d <= opts.side_tol;
      }
      ok = ok && closure_deviation(q.conjugacy_tuple()) <= opts.closure_tol;
    } catch (const CosetError&) {
      ok = false;
    }
    if (!ok) ++rep.failures;
  }
  rep.pass = rep.failures == 0;
  return rep;
}

}  // namespace su2cosets

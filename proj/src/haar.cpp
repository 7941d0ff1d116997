#include "su2cosets/haar.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "su2cosets/completion.hpp"
#include "su2cosets/errors.hpp"

namespace su2cosets {

namespace {

constexpr double kPsdTol3 = 1e-12;
constexpr double kBoundaryDetTol = 1e-12;

double erfc_cdf_upper(double z) {
  // Upper tail of the standard normal.
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

// Chi-square upper-tail p-value via the Wilson-Hilferty cube-root normal
// approximation; adequate for reporting (pass/fail is sigma-based).
double chi2_pvalue(double x, double df) {
  if (df <= 0) return 1.0;
  const double t = std::cbrt(x / df);
  const double mu = 1.0 - 2.0 / (9.0 * df);
  const double sd = std::sqrt(2.0 / (9.0 * df));
  return erfc_cdf_upper((t - mu) / sd);
}

double det3_body(double a, double b, double c) {
  return 1.0 + 2.0 * a * b * c - a * a - b * b - c * c;
}

// PSD test for the 3x3 unit-diagonal matrix with off-entries (a, b, c) via
// nonnegativity of all principal minors; the domain is closed.
bool psd3(double a, double b, double c, double tol = kPsdTol3) {
  if (1.0 - a * a < -tol) return false;
  if (1.0 - b * b < -tol) return false;
  if (1.0 - c * c < -tol) return false;
  return det3_body(a, b, c) >= -tol;
}

// Determinant and positive-definiteness of the 4x4 unit-diagonal matrix
// with upper entries (s01, s02, s03, s12, s13, s23), by leading minors.
struct Det4 {
  double det = 0.0;
  bool pd = false;
};

Det4 det4_body(const std::array<double, 6>& s) {
  const double s01 = s[0], s02 = s[1], s03 = s[2];
  const double s12 = s[3], s13 = s[4], s23 = s[5];
  Eigen::Matrix4d m;
  m << 1, s01, s02, s03,
      s01, 1, s12, s13,
      s02, s12, 1, s23,
      s03, s13, s23, 1;
  Det4 out;
  const double m2 = 1.0 - s01 * s01;
  const double m3 = det3_body(s01, s02, s12);
  out.det = m.determinant();
  out.pd = m2 > 0 && m3 > 0 && out.det > 0;
  return out;
}

// Splits `total` across workers, each with a derived stream, and runs
// fn(worker_index, rng, count). Workers own disjoint accumulator slots, so
// merged integer counts are reproducible regardless of scheduling.
template <typename Fn>
void run_workers(int threads, std::int64_t total, std::uint64_t seed, Fn fn) {
  threads = std::max(1, threads);
  if (threads == 1) {
    Rng rng(Rng::derive(seed, 0));
    fn(0, rng, total);
    return;
  }
  const std::int64_t base = total / threads;
  const std::int64_t rem = total % threads;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    const std::int64_t count = base + (w < rem ? 1 : 0);
    pool.emplace_back([w, count, seed, &fn] {
      Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(w)));
      fn(w, rng, count);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

DensityValue DensityValue::from_log(double lv) {
  DensityValue d;
  d.log_value = lv;
  d.value = std::exp(lv);
  return d;
}

CosetTuple sample_tuple(int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("sample_tuple requires n >= 2");
  std::vector<UnitQuaternion> els;
  els.reserve(n);
  for (int j = 0; j < n; ++j) {
    els.push_back(haar_sample(rng));
  }
  return CosetTuple(std::move(els));
}

DensityValue density_n3(double s12, double s13, double s23) {
  return psd3(s12, s13, s23) ? DensityValue::from_log(0.0)
                             : DensityValue::zero();
}

DensityValue density_n4(const SpectralForm& f) {
  if (f.size() != 4) {
    throw std::invalid_argument("density_n4 requires n = 4");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(f.matrix(),
                                                    Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -rank_eig_threshold(4)) {
    throw CosetError(Errc::not_in_domain,
                     "the 4x4 matrix is not PSD within tolerance");
  }
  const double det = f.matrix().determinant();
  if (det <= kBoundaryDetTol) {
    return DensityValue::infinite();
  }
  return DensityValue::from_log(-0.5 * std::log(det));
}

DensityValue sequential_density(const SpectralForm& f) {
  const int n = f.size();
  if (n < 4) {
    throw std::invalid_argument("sequential_density requires n >= 4");
  }
  if (!psd3(f(0, 1), f(0, 2), f(1, 2))) {
    return DensityValue::zero();
  }
  const double psd_tol = rank_eig_threshold(4);
  double log_sum = 0.0;
  for (int j = 3; j < n; ++j) {
    Eigen::Matrix4d m;
    const int idx[4] = {0, 1, 2, j};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        m(r, c) = f(idx[r], idx[c]);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m,
                                                      Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -psd_tol) {
      throw CosetError(Errc::not_in_domain,
                       "a {1,2,3,j} minor is not PSD within tolerance");
    }
    const double det = m.determinant();
    if (det <= kBoundaryDetTol) {
      return DensityValue::infinite();
    }
    log_sum += -0.5 * std::log(det);
  }
  return DensityValue::from_log(log_sum);
}

GofReport verify_uniform_n3(const UniformN3Options& opts) {
  if (opts.samples < 10'000) {
    throw CosetError(Errc::insufficient_samples,
                     "verify_uniform_n3 needs at least 1e4 samples");
  }
  const int nb = opts.bins_per_axis;
  if (nb < 2) throw std::invalid_argument("bins_per_axis must be >= 2");
  const double h = 2.0 / nb;

  // Cells of the [-1,1]^3 grid entirely inside the PSD body. The body is
  // convex, so a cell is inside iff all eight corners are.
  const int total_cells = nb * nb * nb;
  std::vector<int> compact_id(total_cells, -1);
  int interior = 0;
  for (int ix = 0; ix < nb; ++ix) {
    for (int iy = 0; iy < nb; ++iy) {
      for (int iz = 0; iz < nb; ++iz) {
        bool inside = true;
        for (int corner = 0; corner < 8 && inside; ++corner) {
          const double a = -1.0 + (ix + ((corner >> 0) & 1)) * h;
          const double b = -1.0 + (iy + ((corner >> 1) & 1)) * h;
          const double c = -1.0 + (iz + ((corner >> 2) & 1)) * h;
          inside = psd3(a, b, c);
        }
        if (inside) {
          compact_id[(ix * nb + iy) * nb + iz] = interior++;
        }
      }
    }
  }

  const int threads = std::max(1, opts.threads);
  std::vector<std::vector<std::int64_t>> counts(
      threads, std::vector<std::int64_t>(interior, 0));

  auto cell_of = [&](double v) {
    int i = static_cast<int>((v + 1.0) / h);
    return std::clamp(i, 0, nb - 1);
  };

  run_workers(threads, opts.samples, opts.seed,
              [&](int w, Rng& rng, std::int64_t n_samples) {
                auto& local = counts[w];
                for (std::int64_t s = 0; s < n_samples; ++s) {
                  double a, b, c;
                  if (opts.sampler == N3Sampler::haar) {
                    const UnitQuaternion g1 = haar_sample(rng);
                    const UnitQuaternion g2 = haar_sample(rng);
                    const UnitQuaternion g3 = haar_sample(rng);
                    a = inner(g1, g2);
                    b = inner(g1, g3);
                    c = inner(g2, g3);
                  } else {
                    // Negative control: density proportional to det^{+1/2}.
                    for (;;) {
                      a = rng.uniform(-1.0, 1.0);
                      b = rng.uniform(-1.0, 1.0);
                      c = rng.uniform(-1.0, 1.0);
                      if (!psd3(a, b, c)) continue;
                      const double det = std::max(det3_body(a, b, c), 0.0);
                      if (rng.uniform01() <= std::sqrt(det)) break;
                    }
                  }
                  const int cid =
                      compact_id[(cell_of(a) * nb + cell_of(b)) * nb +
                                 cell_of(c)];
                  if (cid >= 0) ++local[cid];
                }
              });

  std::vector<std::int64_t> observed(interior, 0);
  std::int64_t n_int = 0;
  for (const auto& local : counts) {
    for (int k = 0; k < interior; ++k) observed[k] += local[k];
  }
  for (auto o : observed) n_int += o;

  GofReport rep;
  rep.statistic_name = opts.sampler == N3Sampler::haar
                           ? "uniform-n3 chi-square"
                           : "uniform-n3 chi-square (det^{+1/2} control)";
  rep.sample_count = opts.samples;
  if (interior == 0 || n_int == 0) {
    throw CosetError(Errc::insufficient_samples,
                     "no samples landed in interior cells");
  }

  // Conditional on landing in an interior cell, all cells carry equal
  // probability under the claimed uniform law.
  const double per_cell = static_cast<double>(n_int) / interior;
  std::vector<GofReport::BinRow> groups;
  {
    std::int64_t gobs = 0;
    double gexp = 0.0;
    for (int k = 0; k < interior; ++k) {
      gobs += observed[k];
      gexp += per_cell;
      if (gexp >= opts.min_expected) {
        groups.push_back({static_cast<std::int64_t>(groups.size()), gexp,
                          static_cast<double>(gobs)});
        gobs = 0;
        gexp = 0.0;
      }
    }
    if (gexp > 0.0) {
      if (!groups.empty()) {
        groups.back().expected += gexp;
        groups.back().observed += static_cast<double>(gobs);
      } else {
        groups.push_back({0, gexp, static_cast<double>(gobs)});
      }
    }
  }

  double chi2 = 0.0;
  for (const auto& g : groups) {
    const double d = g.observed - g.expected;
    chi2 += d * d / g.expected;
  }
  const double df = static_cast<double>(groups.size()) - 1.0;
  rep.statistic_value = chi2;
  rep.sigma_deviation = (chi2 - df) / std::sqrt(2.0 * df);
  rep.p_value = chi2_pvalue(chi2, df);
  rep.pass = std::fabs(rep.sigma_deviation) <= opts.sigma_limit;
  rep.bins = std::move(groups);
  std::ostringstream bs;
  bs << nb << "^3 grid on [-1,1]^3, " << interior << " interior cells, "
     << rep.bins.size() << " merged bins, " << n_int
     << " interior hits, df=" << df;
  rep.bin_spec = bs.str();
  return rep;
}

std::vector<Box6> default_n4_boxes() {
  // Interior boxes certified by the corner test below; the smallest
  // eigenvalue is concave in the matrix, so positivity at all 64 corners
  // covers the whole box. Sized and spread so each captures >= ~6e-4 of
  // the Haar pushforward mass at distinct locations of the body.
  return {
      Box6{{-0.30, -0.30, -0.30, -0.30, -0.30, -0.30},
           {0.30, 0.30, 0.30, 0.30, 0.30, 0.30}},
      Box6{{-0.25, -0.25, -0.25, -0.25, -0.25, -0.25},
           {0.35, 0.35, 0.35, 0.35, 0.35, 0.35}},
      Box6{{-0.15, -0.15, -0.15, -0.15, -0.15, -0.15},
           {0.40, 0.40, 0.40, 0.40, 0.40, 0.40}},
  };
}

Box6 default_n4_reference_box() {
  return Box6{{-0.32, -0.32, -0.32, -0.32, -0.32, -0.32},
              {0.32, 0.32, 0.32, 0.32, 0.32, 0.32}};
}

namespace {

// The smallest eigenvalue is concave in the matrix entries, so its minimum
// over a box of symmetric matrices is attained at a vertex; checking all 64
// corners certifies the box lies inside the PSD body.
double box_corner_min_eig(const Box6& b) {
  double worst = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < 64; ++mask) {
    std::array<double, 6> s;
    for (int k = 0; k < 6; ++k) {
      s[k] = (mask >> k & 1) ? b.hi[k] : b.lo[k];
    }
    Eigen::Matrix4d m;
    m << 1, s[0], s[1], s[2], s[0], 1, s[3], s[4], s[1], s[3], 1, s[5], s[2],
        s[4], s[5], 1;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m,
                                                      Eigen::EigenvaluesOnly);
    worst = std::min(worst, es.eigenvalues()(0));
  }
  return worst;
}

// Midpoint-rule integral of det^{-1/2} over a box known to sit inside the
// PSD body.
double quad_det_inv_sqrt(const Box6& box, int points) {
  std::array<double, 6> step;
  double cell = 1.0;
  for (int k = 0; k < 6; ++k) {
    step[k] = (box.hi[k] - box.lo[k]) / points;
    cell *= step[k];
  }
  double sum = 0.0;
  std::array<int, 6> ix{};
  std::array<double, 6> s;
  for (;;) {
    for (int k = 0; k < 6; ++k) {
      s[k] = box.lo[k] + (ix[k] + 0.5) * step[k];
    }
    const Det4 d = det4_body(s);
    if (d.pd) {
      sum += 1.0 / std::sqrt(d.det);
    }
    int k = 0;
    for (; k < 6; ++k) {
      if (++ix[k] < points) break;
      ix[k] = 0;
    }
    if (k == 6) break;
  }
  return sum * cell;
}

}  // namespace

GofReport verify_weighted_n4(const WeightedN4Options& opts) {
  if (opts.samples < 10'000) {
    throw CosetError(Errc::insufficient_samples,
                     "verify_weighted_n4 needs at least 1e4 samples");
  }
  std::vector<Box6> boxes = opts.boxes.empty() ? default_n4_boxes() : opts.boxes;
  const Box6 ref = default_n4_reference_box();
  const int nboxes = static_cast<int>(boxes.size());
  for (const auto& b : boxes) {
    if (box_corner_min_eig(b) < 0.0) {
      throw CosetError(Errc::not_in_domain,
                       "a test box is not certified inside the PSD body");
    }
  }

  const int threads = std::max(1, opts.threads);
  std::vector<std::vector<std::int64_t>> hits(
      threads, std::vector<std::int64_t>(nboxes + 1, 0));

  run_workers(threads, opts.samples, opts.seed,
              [&](int w, Rng& rng, std::int64_t n_samples) {
                auto& local = hits[w];
                for (std::int64_t i = 0; i < n_samples; ++i) {
                  const UnitQuaternion g1 = haar_sample(rng);
                  const UnitQuaternion g2 = haar_sample(rng);
                  const UnitQuaternion g3 = haar_sample(rng);
                  const UnitQuaternion g4 = haar_sample(rng);
                  const std::array<double, 6> s = {
                      inner(g1, g2), inner(g1, g3), inner(g1, g4),
                      inner(g2, g3), inner(g2, g4), inner(g3, g4)};
                  if (ref.contains(s)) ++local[0];
                  for (int b = 0; b < nboxes; ++b) {
                    if (boxes[b].contains(s)) ++local[b + 1];
                  }
                }
              });

  std::vector<std::int64_t> total(nboxes + 1, 0);
  for (const auto& local : hits) {
    for (int b = 0; b <= nboxes; ++b) total[b] += local[b];
  }
  if (total[0] == 0) {
    throw CosetError(Errc::insufficient_samples,
                     "no samples hit the reference box");
  }

  // Pool the reference and test boxes when estimating the constant; the
  // pooled estimator is unbiased (linearity of hit counts) and damps the
  // shared normalizer noise that would otherwise move every residual.
  std::vector<double> q(nboxes + 1);
  q[0] = quad_det_inv_sqrt(ref, opts.quad_points);
  double q_pool = q[0];
  std::int64_t hits_pool = total[0];
  for (int b = 0; b < nboxes; ++b) {
    q[b + 1] = quad_det_inv_sqrt(boxes[b], opts.quad_points);
    q_pool += q[b + 1];
    hits_pool += total[b + 1];
  }
  const double c_norm =
      static_cast<double>(hits_pool) / opts.samples / q_pool;

  GofReport rep;
  rep.statistic_name = "weighted-n4 MC vs det^{-1/2} quadrature";
  rep.sample_count = opts.samples;
  double max_rel = 0.0;
  std::ostringstream note;
  note << "pooled normalizer " << c_norm << " from " << hits_pool
       << " hits;";
  for (int b = 0; b < nboxes; ++b) {
    const double predicted = c_norm * q[b + 1];
    const double observed =
        static_cast<double>(total[b + 1]) / opts.samples;
    const double rel = std::fabs(observed - predicted) / predicted;
    max_rel = std::max(max_rel, rel);
    rep.bins.push_back({b, predicted * opts.samples,
                        static_cast<double>(total[b + 1])});
    note << " box" << b << " rel_err " << rel << " (" << total[b + 1]
         << " hits);";
  }
  rep.statistic_value = max_rel;
  rep.sigma_deviation = 0.0;
  rep.p_value = 0.0;
  rep.pass = max_rel <= opts.rel_tol;
  rep.note = note.str();
  std::ostringstream bs;
  bs << nboxes << " interior boxes, " << opts.quad_points
     << " quadrature points/axis, rel_tol " << opts.rel_tol;
  rep.bin_spec = bs.str();
  return rep;
}

GofReport verify_branch_equiprobability(const BranchOptions& opts) {
  if (opts.samples < 10'000) {
    throw CosetError(Errc::insufficient_samples,
                     "verify_branch_equiprobability needs at least 1e4 "
                     "samples");
  }
  if (opts.n < 5) {
    throw std::invalid_argument("branch harness requires n >= 5");
  }
  const bool pair_mode = opts.n >= 6;

  struct Accum {
    std::int64_t table[2][2] = {{0, 0}, {0, 0}};
    std::int64_t single[2] = {0, 0};
    std::int64_t excluded = 0;
    double max_mismatch = 0.0;
  };
  const int threads = std::max(1, opts.threads);
  std::vector<Accum> acc(threads);

  run_workers(
      threads, opts.samples, opts.seed,
      [&](int w, Rng& rng, std::int64_t n_samples) {
        Accum& a = acc[w];
        for (std::int64_t i = 0; i < n_samples; ++i) {
          const CosetTuple t = sample_tuple(opts.n, rng);
          const SpectralForm f = spectral_form(t);
          int labels[2] = {-1, -1};
          bool ok = true;
          const int jmax = pair_mode ? 5 : 4;
          for (int j = 4; j <= jmax && ok; ++j) {
            QuadraticRoots roots{};
            try {
              roots = solve_minor_quadratic(f, 3, j);
            } catch (const CosetError&) {
              ok = false;
              break;
            }
            if (roots.degenerate_linear ||
                roots.upper - roots.lower < opts.root_gap_min) {
              ok = false;
              break;
            }
            const double actual = f(3, j);
            const double d_lo = std::fabs(actual - roots.lower);
            const double d_hi = std::fabs(actual - roots.upper);
            labels[j - 4] = d_lo <= d_hi ? 0 : 1;
            a.max_mismatch = std::max(a.max_mismatch, std::min(d_lo, d_hi));
          }
          if (!ok) {
            ++a.excluded;
            continue;
          }
          if (pair_mode) {
            ++a.table[labels[0]][labels[1]];
          } else {
            ++a.single[labels[0]];
          }
        }
      });

  Accum sum;
  for (const auto& a : acc) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) sum.table[r][c] += a.table[r][c];
      sum.single[r] += a.single[r];
    }
    sum.excluded += a.excluded;
    sum.max_mismatch = std::max(sum.max_mismatch, a.max_mismatch);
  }

  GofReport rep;
  rep.statistic_name = pair_mode ? "branch equiprobability (s_45, s_46)"
                                 : "branch equiprobability (s_45 marginal)";
  rep.sample_count = opts.samples;
  std::ostringstream note;
  double worst = 0.0;
  if (pair_mode) {
    const std::int64_t n00 = sum.table[0][0], n01 = sum.table[0][1];
    const std::int64_t n10 = sum.table[1][0], n11 = sum.table[1][1];
    const std::int64_t n = n00 + n01 + n10 + n11;
    const double half_sd = std::sqrt(n / 4.0);
    const double z1 = ((n10 + n11) - n / 2.0) / half_sd;
    const double z2 = ((n01 + n11) - n / 2.0) / half_sd;
    const double r0 = static_cast<double>(n00 + n01);
    const double r1 = static_cast<double>(n10 + n11);
    const double c0 = static_cast<double>(n00 + n10);
    const double c1 = static_cast<double>(n01 + n11);
    const double num = static_cast<double>(n00) * n11 -
                       static_cast<double>(n01) * n10;
    const double chi2 = n * num * num / (r0 * r1 * c0 * c1);
    const double z_ind = (chi2 - 1.0) / std::sqrt(2.0);
    worst = std::max({std::fabs(z1), std::fabs(z2), z_ind});
    rep.statistic_value = chi2;
    rep.p_value = chi2_pvalue(chi2, 1.0);
    note << "counts [[" << n00 << "," << n01 << "],[" << n10 << "," << n11
         << "]], marginal z " << z1 << " / " << z2 << ", independence z "
         << z_ind << ", excluded " << sum.excluded << ", max root mismatch "
         << sum.max_mismatch;
    rep.bins = {{0, n / 4.0, static_cast<double>(n00)},
                {1, n / 4.0, static_cast<double>(n01)},
                {2, n / 4.0, static_cast<double>(n10)},
                {3, n / 4.0, static_cast<double>(n11)}};
  } else {
    const std::int64_t n = sum.single[0] + sum.single[1];
    const double z = (sum.single[1] - n / 2.0) / std::sqrt(n / 4.0);
    worst = std::fabs(z);
    rep.statistic_value = z;
    rep.p_value = 2.0 * erfc_cdf_upper(std::fabs(z));
    note << "counts [" << sum.single[0] << "," << sum.single[1]
         << "], marginal z " << z << ", excluded " << sum.excluded;
    rep.bins = {{0, n / 2.0, static_cast<double>(sum.single[0])},
                {1, n / 2.0, static_cast<double>(sum.single[1])}};
  }
  rep.sigma_deviation = worst;
  rep.pass = worst <= opts.sigma_limit;
  rep.note = note.str();
  rep.bin_spec = pair_mode ? "2x2 contingency" : "binomial marginal";
  return rep;
}

namespace {

std::mutex normalizer_mutex;
std::map<std::tuple<int, std::int64_t, std::uint64_t, int>, double>
    normalizer_cache;

double estimate_normalizer(int n, const NormalizerOptions& opts) {
  if (n == 3) {
    // Uniform on the PSD body: constant = 1 / volume.
    std::vector<std::int64_t> in(std::max(1, opts.threads), 0);
    run_workers(opts.threads, opts.samples, opts.seed,
                [&](int w, Rng& rng, std::int64_t count) {
                  for (std::int64_t i = 0; i < count; ++i) {
                    const double a = rng.uniform(-1.0, 1.0);
                    const double b = rng.uniform(-1.0, 1.0);
                    const double c = rng.uniform(-1.0, 1.0);
                    if (psd3(a, b, c)) ++in[w];
                  }
                });
    std::int64_t hits = 0;
    for (auto v : in) hits += v;
    const double volume = 8.0 * hits / static_cast<double>(opts.samples);
    return 1.0 / volume;
  }
  if (n < 4) {
    throw std::invalid_argument("density_normalizer requires n >= 3");
  }

  // Reference region: (s12, s13, s23) in S and every (s1j, s2j, s3j) in V,
  // both [-0.25, 0.25]^3, safely interior. The sequential density
  // factorizes over j given the leading triple, so the quadrature nests:
  // integral over S of [I_V(s)]^(n-3).
  const double lo = -0.25, hi = 0.25;
  const int q = opts.quad_points;
  const double hq = (hi - lo) / q;

  std::vector<std::int64_t> in(std::max(1, opts.threads), 0);
  run_workers(opts.threads, opts.samples, opts.seed,
              [&](int w, Rng& rng, std::int64_t count) {
                std::vector<UnitQuaternion> g(n);
                for (std::int64_t i = 0; i < count; ++i) {
                  for (int k = 0; k < n; ++k) g[k] = haar_sample(rng);
                  bool ok = std::fabs(inner(g[0], g[1])) <= hi &&
                            std::fabs(inner(g[0], g[2])) <= hi &&
                            std::fabs(inner(g[1], g[2])) <= hi;
                  for (int j = 3; j < n && ok; ++j) {
                    ok = std::fabs(inner(g[0], g[j])) <= hi &&
                         std::fabs(inner(g[1], g[j])) <= hi &&
                         std::fabs(inner(g[2], g[j])) <= hi;
                  }
                  if (ok) ++in[w];
                }
              });
  std::int64_t hits = 0;
  for (auto v : in) hits += v;
  if (hits == 0) {
    throw CosetError(Errc::insufficient_samples,
                     "normalizer reference region was never hit");
  }
  const double p_ref = static_cast<double>(hits) / opts.samples;

  double outer = 0.0;
  std::array<double, 6> s{};
  for (int i0 = 0; i0 < q; ++i0) {
    s[0] = lo + (i0 + 0.5) * hq;
    for (int i1 = 0; i1 < q; ++i1) {
      s[1] = lo + (i1 + 0.5) * hq;
      for (int i2 = 0; i2 < q; ++i2) {
        s[3] = lo + (i2 + 0.5) * hq;  // s23 slot in det4_body order
        double inner_sum = 0.0;
        std::array<double, 6> t = s;
        for (int j0 = 0; j0 < q; ++j0) {
          t[2] = lo + (j0 + 0.5) * hq;  // s14
          for (int j1 = 0; j1 < q; ++j1) {
            t[4] = lo + (j1 + 0.5) * hq;  // s24
            for (int j2 = 0; j2 < q; ++j2) {
              t[5] = lo + (j2 + 0.5) * hq;  // s34
              const Det4 d = det4_body(t);
              if (d.pd) inner_sum += 1.0 / std::sqrt(d.det);
            }
          }
        }
        const double i_v = inner_sum * hq * hq * hq;
        outer += std::pow(i_v, n - 3);
      }
    }
  }
  outer *= hq * hq * hq;
  return p_ref / outer;
}

}  // namespace

double density_normalizer(int n, const NormalizerOptions& opts) {
  const auto key =
      std::make_tuple(n, opts.samples, opts.seed, opts.quad_points);
  {
    std::lock_guard<std::mutex> lock(normalizer_mutex);
    auto it = normalizer_cache.find(key);
    if (it != normalizer_cache.end()) return it->second;
  }
  const double value = estimate_normalizer(n, opts);
  std::lock_guard<std::mutex> lock(normalizer_mutex);
  normalizer_cache.emplace(key, value);
  return value;
}

}  // namespace su2cosets

#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "su2cosets/rng.hpp"
#include "su2cosets/spectral_form.hpp"

namespace su2cosets {

// Unnormalized density value carried together with its logarithm; the
// boundary of the rank-4 body is marked by +infinity.
struct DensityValue {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();

  static DensityValue from_log(double lv);
  static DensityValue zero() { return {}; }
  static DensityValue infinite() {
    return {std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }
  bool is_infinite() const { return std::isinf(value) && value > 0; }
};

// Result of one goodness-of-fit run.
struct GofReport {
  std::string statistic_name;
  double statistic_value = 0.0;
  std::int64_t sample_count = 0;
  std::string bin_spec;
  double sigma_deviation = 0.0;
  double p_value = 0.0;
  bool pass = false;
  std::string note;
  // Per-bin rows (bin id, expected, observed) for CSV export; empty when
  // the statistic is not histogram-based.
  struct BinRow {
    std::int64_t id;
    double expected;
    double observed;
  };
  std::vector<BinRow> bins;
};

// n independent Haar samples.
CosetTuple sample_tuple(int n, Rng& rng);

// Pushforward densities of the Haar measure in spectral-form coordinates,
// all unnormalized (see density_normalizer).

// n = 3: the indicator of the PSD body in (s12, s13, s23); the domain is
// closed, so boundary points count as inside.
DensityValue density_n3(double s12, double s13, double s23);

// n = 4: det(Delta)^{-1/2} on the PSD body, +infinity on the det = 0
// boundary. Throws NotInDomain when PSD fails beyond tolerance.
DensityValue density_n4(const SpectralForm& f);

// n >= 4: product over j >= 4 of det(Delta_j)^{-1/2} with Delta_j the
// {1,2,3,j} minor, times the indicator of the n = 3 domain. Coincides with
// density_n4 for n = 4.
DensityValue sequential_density(const SpectralForm& f);

struct NormalizerOptions {
  std::int64_t samples = 2'000'000;
  std::uint64_t seed = 0x5eedULL;
  int quad_points = 12;  // nested quadrature is quad_points^6 evaluations
  int threads = 1;
};

// Numerical estimate of the constant c making c * (unnormalized density) a
// probability density, cached per (n, options). Monte Carlo against a
// fixed interior reference box; the closed-form theorems never fix these
// constants.
double density_normalizer(int n, const NormalizerOptions& opts = {});

enum class N3Sampler {
  haar,          // pushforward of Haar triples through zeta
  det_plus_half  // negative control: density proportional to det^{+1/2}
};

struct UniformN3Options {
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 1;
  int threads = 1;
  int bins_per_axis = 10;
  double min_expected = 20.0;
  double sigma_limit = 3.0;
  N3Sampler sampler = N3Sampler::haar;
};

// Chi-square uniformity test of (s12, s13, s23) over the PSD body. Cells of
// a uniform grid on [-1,1]^3 that lie entirely inside the (convex) body
// carry equal probability under the claimed law; the test conditions on
// landing in such cells, so no boundary-cell volume ever enters. Bins are
// merged until each expects at least min_expected.
GofReport verify_uniform_n3(const UniformN3Options& opts);

struct Box6 {
  std::array<double, 6> lo;
  std::array<double, 6> hi;
  bool contains(const std::array<double, 6>& s) const {
    for (int k = 0; k < 6; ++k) {
      if (s[k] < lo[k] || s[k] >= hi[k]) return false;
    }
    return true;
  }
};

// Interior boxes (in upper-triangle coordinate order s12, s13, s14, s23,
// s24, s34), each certified inside the PSD body by a corner check and
// sized to capture enough Monte Carlo mass for a 2% comparison at 1e7
// samples.
std::vector<Box6> default_n4_boxes();
Box6 default_n4_reference_box();

struct WeightedN4Options {
  std::int64_t samples = 10'000'000;
  std::uint64_t seed = 1;
  int threads = 1;
  int quad_points = 16;
  double rel_tol = 0.02;
  std::vector<Box6> boxes;  // empty -> default_n4_boxes()
};

// Compares Monte Carlo box probabilities under the Haar pushforward at
// n = 4 against midpoint quadrature of det^{-1/2}, with the overall
// constant calibrated on a reference box. Throws InsufficientSamples below
// 1e4 samples.
GofReport verify_weighted_n4(const WeightedN4Options& opts);

struct BranchOptions {
  int n = 6;
  std::int64_t samples = 100'000;
  std::uint64_t seed = 1;
  int threads = 1;
  double root_gap_min = 1e-6;  // boundary shell excluded from counting
  double sigma_limit = 3.0;
};

// For Haar tuples, classifies which root of the minor quadratic realizes
// s_{4j} (1-based) for j = 5, 6 and tests that the two labels have
// marginals 1/2 and are independent. With n = 5 only the marginal test
// runs. Throws InsufficientSamples below 1e4 samples.
GofReport verify_branch_equiprobability(const BranchOptions& opts);

}  // namespace su2cosets

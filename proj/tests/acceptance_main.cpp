// Acceptance suite: one binary, one pass/fail line per criterion, exit
// code = number of failures. Every tolerance is pinned here; seeds are
// fixed so reruns are reproducible.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "su2cosets/actions.hpp"
#include "su2cosets/canonical.hpp"
#include "su2cosets/completion.hpp"
#include "su2cosets/errors.hpp"
#include "su2cosets/haar.hpp"
#include "su2cosets/polygon.hpp"
#include "su2cosets/spectral_form.hpp"
#include "test_support.hpp"

namespace sc = su2cosets;
using test_support::ks_statistic;
using test_support::random_rank3_tuple;

namespace {

struct Criterion {
  std::string name;
  std::function<std::string()> run;  // returns "" on pass, reason on fail
};

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// 1. Closed-form actions against the matrix oracle: n = 5, 1e4 tuples,
//    entrywise 1e-8 (oracle-resolved branch); theta sign rule agrees with
//    the oracle branch on >= 99.9% of the non-excluded checks.
std::string criterion_actions_oracle() {
  sc::ActionsOracleOptions opts;
  opts.n = 5;
  opts.trials = 10'000;
  opts.seed = 0xACE1;
  opts.threads = 4;
  opts.entry_tol = 1e-8;
  opts.sin_exclusion = 1e-6;
  opts.min_agreement = 0.999;
  const auto rep = sc::verify_actions_oracle(opts);
  if (!rep.pass) {
    return fmt(
        "max errors inv %.2e lmul %.2e braid %.2e; sign agreement %.5f "
        "(%lld/%lld, %lld excluded)",
        rep.max_invert_error, rep.max_left_multiply_error,
        rep.max_braid_error, rep.agreement(),
        static_cast<long long>(rep.sign_agreed),
        static_cast<long long>(rep.sign_checked),
        static_cast<long long>(rep.sign_excluded));
  }
  return "";
}

// 2. Reconstruction roundtrip and the two-sheet branching.
std::string criterion_roundtrip_branching() {
  sc::Rng rng(0xBEE1);
  for (int i = 0; i < 1000; ++i) {
    const sc::CosetTuple t = sc::sample_tuple(5, rng);
    const auto back = sc::reconstruct(sc::sheeted_form(t));
    if (!sc::equivalent(t, back).equivalent) {
      return fmt("roundtrip failed at trial %d", i);
    }
  }
  int rank4_done = 0;
  while (rank4_done < 100) {
    const sc::CosetTuple t = sc::sample_tuple(5, rng);
    const auto f = sc::spectral_form(t);
    if (sc::numerical_rank(f) <= 3) continue;
    const auto plus = sc::reconstruct(sc::SheetedForm{f, +1});
    const auto minus = sc::reconstruct(sc::SheetedForm{f, -1});
    if (sc::spectral_form(plus).max_entry_distance(f) > 1e-8 ||
        sc::spectral_form(minus).max_entry_distance(f) > 1e-8) {
      return "sheet representatives do not reproduce the form within 1e-8";
    }
    if (sc::equivalent(plus, minus).equivalent) {
      return "the two sheets reconstructed to equivalent tuples";
    }
    ++rank4_done;
  }
  for (int i = 0; i < 100; ++i) {
    const sc::CosetTuple t = random_rank3_tuple(5, rng);
    if (!sc::equivalent(t, sc::transpose_elementwise(t)).equivalent) {
      return fmt("rank <= 3 tuple not equivalent to its transpose (trial %d)",
                 i);
    }
  }
  return "";
}

// 3. Uniformity of (s12, s13, s23) on the PSD body at 1e6 samples, with
//    the det^{+1/2} negative control required to fail.
std::string criterion_haar_n3() {
  sc::UniformN3Options opts;
  opts.samples = 1'000'000;
  opts.seed = 0xC0FE;
  opts.threads = 4;
  opts.bins_per_axis = 10;
  opts.min_expected = 20.0;
  opts.sigma_limit = 3.0;
  const auto rep = sc::verify_uniform_n3(opts);
  if (!rep.pass) {
    return fmt("chi-square sigma deviation %.2f exceeds 3", rep.sigma_deviation);
  }
  auto control = opts;
  control.sampler = sc::N3Sampler::det_plus_half;
  control.samples = 200'000;
  const auto neg = sc::verify_uniform_n3(control);
  if (neg.pass) {
    return "det^{+1/2} negative control unexpectedly passed";
  }
  return "";
}

// 4. n = 4 box masses at 1e7 samples against det^{-1/2} quadrature, 2%.
std::string criterion_haar_n4() {
  sc::WeightedN4Options opts;
  opts.samples = 10'000'000;
  opts.seed = 0xDA7A;
  opts.threads = 4;
  opts.quad_points = 16;
  opts.rel_tol = 0.02;
  const auto rep = sc::verify_weighted_n4(opts);
  if (!rep.pass) {
    return fmt("max relative error %.4f exceeds 0.02 [%s]",
               rep.statistic_value, rep.note.c_str());
  }
  return "";
}

// 5. Branch equiprobability and independence at n = 6, 1e5 samples.
std::string criterion_branch() {
  sc::BranchOptions opts;
  opts.n = 6;
  opts.samples = 100'000;
  opts.seed = 0xB0A7;
  opts.threads = 4;
  opts.sigma_limit = 3.0;
  const auto rep = sc::verify_branch_equiprobability(opts);
  if (!rep.pass) {
    return fmt("worst z %.2f exceeds 3 [%s]", rep.sigma_deviation,
               rep.note.c_str());
  }
  return "";
}

// 6. Minor quadratic root recovery and four-row completion at n = 6.
std::string criterion_completion() {
  sc::Rng rng(0xF111);
  int done = 0;
  while (done < 1000) {
    const sc::CosetTuple t = sc::sample_tuple(5, rng);
    const auto f = sc::spectral_form(t);
    if (sc::numerical_rank(f) <= 3) continue;
    const auto roots = sc::solve_minor_quadratic(f, 3, 4);
    const double actual = f(3, 4);
    const double nearest =
        std::fabs(actual - roots.lower) <= std::fabs(actual - roots.upper)
            ? roots.lower
            : roots.upper;
    if (std::fabs(nearest - actual) > 1e-8) {
      return fmt("root misses s_45 by %.2e at trial %d",
                 std::fabs(nearest - actual), done);
    }
    ++done;
  }
  done = 0;
  while (done < 200) {
    const sc::CosetTuple t = sc::sample_tuple(6, rng);
    const auto f = sc::spectral_form(t);
    if (sc::numerical_rank(f) <= 3) continue;
    Eigen::MatrixXd blanked = f.matrix();
    blanked(4, 5) = blanked(5, 4) = 0.0;
    const auto rebuilt = sc::complete_form(sc::SpectralForm(blanked));
    if (rebuilt.max_entry_distance(f) > 1e-7) {
      return fmt("completion error %.2e at trial %d",
                 rebuilt.max_entry_distance(f), done);
    }
    ++done;
  }
  return "";
}

// 7. Group laws: braid relations on Pi(5), the kernel word on Pi(3) and
//    Pi(4), and the Artin conditions for 50 random braid words.
std::string criterion_group_laws() {
  sc::Rng rng(0x6E01);
  const auto relations = sc::verify_braid_relations(5, 1000, rng);
  if (!relations.pass) {
    return fmt("braid relations failed %d/%d trials", relations.failures,
               relations.trials);
  }
  for (int n : {3, 4}) {
    const auto kernel = sc::verify_kernel_element(n, 100, rng);
    if (!kernel.pass) {
      return fmt("kernel word not trivial on Pi(%d): %d failures", n,
                 kernel.failures);
    }
  }
  for (int w = 0; w < 50; ++w) {
    sc::GroupWord word;
    const int len = 1 + static_cast<int>(rng.next_u64() % 10);
    for (int i = 0; i < len; ++i) {
      const int pos = 2 + static_cast<int>(rng.next_u64() % 3);  // n = 5
      const int e = (rng.next_u64() & 1) ? 1 : -1;
      word.tokens.push_back(sc::BraidToken{pos, e});
    }
    const auto rep = sc::artin_check(word, 5, 10, rng);
    if (!rep.pass) {
      return fmt("Artin conditions failed for word %d (%s)", w,
                 sc::format_word(word).c_str());
    }
  }
  return "";
}

// 8. Eigen-angle law (2/pi) sin^2 via KS at 1e5 samples, alpha = 1e-3.
std::string criterion_eigen_angle_ks() {
  sc::Rng rng(0x5107);
  const int n = 100'000;
  std::vector<double> phis(n);
  for (auto& p : phis) p = sc::eigen_angle(sc::haar_sample(rng));
  const double d = ks_statistic(phis, test_support::eigen_angle_cdf);
  const double scaled = d * std::sqrt(static_cast<double>(n));
  // KS critical value at significance 1e-3.
  if (scaled >= 1.9495) {
    return fmt("KS statistic sqrt(n) D = %.4f exceeds 1.9495", scaled);
  }
  return "";
}

// 9. Pure-braid words preserve polygon side lengths and closure.
std::string criterion_polygon() {
  sc::PolygonPureOptions opts;
  opts.polygon_count = 100;
  opts.seed = 0x9017;
  opts.side_tol = 1e-10;
  opts.closure_tol = 1e-9;
  const auto rep = sc::verify_polygon_pure(opts);
  if (!rep.pass) {
    return fmt("%d/%d polygons failed (max side error %.2e)", rep.failures,
               rep.trials, rep.max_error);
  }
  return "";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"1 closed-form actions match the matrix oracle", criterion_actions_oracle},
      {"2 reconstruction roundtrip and two-sheet branching",
       criterion_roundtrip_branching},
      {"3 (s12,s13,s23) uniform on the PSD body + negative control",
       criterion_haar_n3},
      {"4 n=4 box masses match det^{-1/2} quadrature within 2%",
       criterion_haar_n4},
      {"5 completion branch labels: fair and independent", criterion_branch},
      {"6 minor quadratic recovery and four-row completion",
       criterion_completion},
      {"7 braid relations, kernel word, Artin conditions",
       criterion_group_laws},
      {"8 eigen-angle KS test against (2/pi) sin^2", criterion_eigen_angle_ks},
      {"9 pure braids preserve polygon sides and closure", criterion_polygon},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string reason;
    try {
      reason = c.run();
    } catch (const std::exception& e) {
      reason = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (reason.empty()) {
      std::printf("[PASS] criterion %s (%.1fs)\n", c.name.c_str(), secs);
    } else {
      std::printf("[FAIL] criterion %s (%.1fs): %s\n", c.name.c_str(), secs,
                  reason.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("acceptance: %d criteria FAILED\n", failures);
  }
  return failures;
}

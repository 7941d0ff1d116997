#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "su2cosets/canonical.hpp"
#include "su2cosets/spectral_form.hpp"
#include "su2cosets/tuple.hpp"

namespace su2cosets {

// Generator tokens act on normalized tuples (1, g_2, ..., g_n); all
// indices below are 1-based tuple positions in [2, n], matching the slot
// labels of the free generators c_{k-1} = g_k.

struct PermuteToken {
  // images[k - 2] is the position whose element moves INTO position k,
  // i.e. new g_k = old g_{images[k-2]}; a permutation of {2..n}.
  std::vector<int> images;
};

struct InvertToken {
  int k;  // g_k -> g_k^-1
};

struct LeftMultiplyToken {
  int j, k;  // g_k -> g_j g_k, j != k
};

struct BraidToken {
  // Position k in [2, n-1]: exponent +1 maps (g_k, g_{k+1}) to
  // (g_k g_{k+1} g_k^-1, g_k); exponent -1 applies the inverse map.
  // The braid generator sigma_i acts at position k = i + 1.
  int k;
  int exponent;  // +1 or -1
};

using GeneratorToken =
    std::variant<PermuteToken, InvertToken, LeftMultiplyToken, BraidToken>;

struct GroupWord {
  std::vector<GeneratorToken> tokens;
};

// Word syntax: whitespace-separated tokens "perm:2,4,3,5", "inv:2",
// "lmul:2,3", "s1", "s2^-1". Braid tokens use the sigma index (s1 acts on
// positions 2,3). Throws SchemaError on malformed input.
GroupWord parse_word(const std::string& text);
std::string format_word(const GroupWord& w);

// Applies tokens left to right; the input is leading-normalized first and
// the result is normalized. Throws IndexError for out-of-range positions.
CosetTuple act_tuple(const CosetTuple& t, const GroupWord& w);

// Permutation of free slots 1..n-1 underlying the word: result[f] is the
// slot whose original content (up to conjugation) occupies slot f after
// the action. Inversions and left multiplications count as identity.
std::vector<int> word_permutation(const GroupWord& w, int n);

// Closed-form action of g_2 -> g_2^-1 on spectral forms with the
// designated-index convention p = s_12, q_j = s_{1,j+2}, r_j = s_{2,j+2}:
// r_j -> -r_j + 2 p q_j, everything else fixed. Valid for any n >= 3.
SpectralForm form_invert(const SpectralForm& f);

enum class SignPolicy {
  theta_rule,  // the paper's theta-difference rule, driven by resolve_coordinates
  oracle       // per-instance resolution against zeta(act_tuple(...))
};

struct FormActionResult {
  SheetedForm result;
  // Input had sheet 0 (rank <= 3); the closed-form sign rule does not
  // apply and the whole map fell back to reconstruct -> act -> zeta.
  bool rank_degenerate_fallback = false;
  // Branch sign (+1/-1) used for each radical entry, in the order of the
  // columns updated; 0 marks a column where the theta rule was undefined
  // and the oracle resolved it.
  std::vector<int> branch_signs;
};

// Closed-form action of (1, g_2, g_3, ...) -> (1, g_2, g_2 g_3, ...):
// q~_1 = -r_1 + 2 p q_1, r~_1 = q_1, and for each later column the radical
// update p t_1j - q_j r_1 + q_1 r_j -+ sqrt(det_4), sign chosen by
// `policy`. The output sheet is recomputed through the reconstruction
// path. Throws NegativeDiscriminant when a radicand is below -1e-9.
FormActionResult form_left_multiply(const SheetedForm& sf,
                                    SignPolicy policy = SignPolicy::theta_rule);

// Closed-form action of the braid generator sigma_k (free-slot index,
// sigma_k exchanges tuple positions k+1, k+2): block swap
// p_k <-> p_{k+1}, h_{(k+1)j} <- h_{kj}, and the 3x3-determinant /
// 4x4-radical update of h_kj. The theta rule applies only to k = 1 (the
// case the paper works out); other k resolve the branch by oracle.
FormActionResult form_braid_general(const SheetedForm& sf, int k,
                                    SignPolicy policy = SignPolicy::theta_rule);

// n = 5 surface of the same map.
FormActionResult form_braid(const SheetedForm& sf, int k,
                            SignPolicy policy = SignPolicy::theta_rule);

struct CheckReport {
  std::string name;
  int trials = 0;
  int failures = 0;
  double max_error = 0.0;
  bool pass = false;
  std::string note;
};

// Empirically verifies the two Artin conditions for the word on random
// tuples: (1) each slot's image is conjugate to some original slot, with
// the recovered permutation consistent across trials, and (2) the product
// g_2 g_3 ... g_n is preserved as a matrix identity within 1e-10. Accepts
// arbitrary words so that non-braid words can serve as negative controls;
// only braid words are guaranteed to pass.
CheckReport artin_check(const GroupWord& w, int n, int trials, Rng& rng);

// Both braid relations checked on random tuples through equivalent().
CheckReport verify_braid_relations(int n, int trials, Rng& rng);

// The kernel word ((s1..s_{k-1})(s1..s_{k-2})...s1)^2 for k = n-1 strands
// acts trivially on Pi(n).
CheckReport verify_kernel_element(int n, int trials, Rng& rng);

GroupWord kernel_word(int n);

struct ActionsOracleOptions {
  int n = 5;
  int trials = 10'000;
  std::uint64_t seed = 1;
  int threads = 1;
  double entry_tol = 1e-8;
  double sin_exclusion = 1e-6;    // |sin(theta_1 - theta_j)| cutoff
  double min_agreement = 0.999;   // theta rule vs oracle branch
};

struct ActionsOracleReport {
  int trials = 0;
  int degenerate_skipped = 0;  // sheet-0 inputs (measure zero under Haar)
  double max_invert_error = 0.0;
  double max_left_multiply_error = 0.0;
  double max_braid_error = 0.0;
  std::int64_t sign_checked = 0;
  std::int64_t sign_agreed = 0;
  std::int64_t sign_excluded = 0;
  bool entries_pass = false;
  bool sign_rule_pass = false;
  bool pass = false;
  double agreement() const {
    return sign_checked == 0
               ? 1.0
               : static_cast<double>(sign_agreed) / static_cast<double>(sign_checked);
  }
};

// Oracle harness: for Haar tuples, compares each closed-form map against
// zeta(act_tuple(...)) entrywise and the theta sign rule against the
// oracle-resolved branch.
ActionsOracleReport verify_actions_oracle(const ActionsOracleOptions& opts);

}  // namespace su2cosets

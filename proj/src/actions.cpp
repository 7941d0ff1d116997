#include "su2cosets/actions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>

#include "su2cosets/errors.hpp"
#include "su2cosets/haar.hpp"

namespace su2cosets {

namespace {

constexpr double kRadicandClamp = 1e-9;

int parse_int(const std::string& s, const char* ctx) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw CosetError(Errc::schema_error,
                     std::string("bad integer in ") + ctx + ": '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void check_position(int k, int n, const char* what) {
  if (k < 2 || k > n) {
    throw CosetError(Errc::index_error,
                     std::string(what) + " position out of range [2, n]");
  }
}

double det4_minor(const Eigen::MatrixXd& s, int a, int b, int c, int d) {
  Eigen::Matrix4d m;
  const int idx[4] = {a, b, c, d};
  for (int r = 0; r < 4; ++r) {
    for (int cc = 0; cc < 4; ++cc) {
      m(r, cc) = s(idx[r], idx[cc]);
    }
  }
  return m.determinant();
}

double clamped_radical(double det, const char* ctx) {
  if (det < -kRadicandClamp) {
    throw CosetError(Errc::negative_discriminant,
                     std::string(ctx) + ": radicand below -1e-9");
  }
  return std::sqrt(std::max(det, 0.0));
}

// Algebraic part and radical term of an updated entry; the full entry is
// base + sign * radical with the sign carrying the sheet information.
struct RadicalEntry {
  double base;
  double radical;
};

// Entry <g_2 g_3, g_{j+1}> of the left-multiplication map, matrix column
// j >= 3, formulas reading the pre-action matrix.
RadicalEntry left_multiply_entry(const Eigen::MatrixXd& s, int j) {
  const double p = s(0, 1), q1 = s(0, 2), r1 = s(1, 2);
  const double qj = s(0, j), rj = s(1, j), t1j = s(2, j);
  RadicalEntry e;
  e.base = p * t1j - qj * r1 + q1 * rj;
  e.radical = clamped_radical(det4_minor(s, 0, 1, 2, j), "left_multiply");
  return e;
}

// Entry <c_k c_{k+1} c_k^-1, c_j> of the braid map; k, j are matrix
// columns (free slots), j not in {0, k, k+1}.
RadicalEntry braid_entry(const Eigen::MatrixXd& s, int k, int j) {
  const double pk = s(0, k), pk1 = s(0, k + 1), pj = s(0, j);
  const double hkk1 = s(k, k + 1), hkj = s(k, j), hk1j = s(k + 1, j);
  // det [[1, pk, pk1], [pk, 1, hkk1], [pj, hkj, hk1j]]
  const double det3 = hk1j - hkk1 * hkj - pk * pk * hk1j + pk * pj * hkk1 +
                      pk * pk1 * hkj - pk1 * pj;
  RadicalEntry e;
  e.base = hk1j - 2.0 * det3;
  e.radical =
      2.0 * pk * clamped_radical(det4_minor(s, 0, k, k + 1, j), "braid");
  return e;
}

int pick_sign(const RadicalEntry& e, double target) {
  return std::fabs(e.base + e.radical - target) <=
                 std::fabs(e.base - e.radical - target)
             ? +1
             : -1;
}

// Sign rule: in the theta_1 = 0 gauge take minus when
// theta(base column) - theta(column) >= 0. Defined whenever the
// sheet-resolved coordinates exist.
std::optional<std::vector<int>> theta_signs_for(const SheetedForm& sf,
                                                const std::vector<int>& cols) {
  try {
    const CanonicalCoordinates coords = resolve_coordinates(sf.form, sf.sheet);
    std::vector<int> signs;
    signs.reserve(cols.size());
    for (int col : cols) {
      const double diff = coords.theta[0] - coords.theta[col - 2];
      signs.push_back(diff >= 0.0 ? -1 : +1);
    }
    return signs;
  } catch (const CosetError&) {
    return std::nullopt;
  }
}

UnitQuaternion product_of_free_slots(const CosetTuple& t) {
  UnitQuaternion prod = UnitQuaternion::identity();
  for (int j = 1; j < t.size(); ++j) {
    prod = compose(prod, t[j]);
  }
  return prod;
}

}  // namespace

GroupWord parse_word(const std::string& text) {
  GroupWord w;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok.rfind("perm:", 0) == 0) {
      PermuteToken p;
      for (const auto& part : split(tok.substr(5), ',')) {
        p.images.push_back(parse_int(part, "perm"));
      }
      w.tokens.emplace_back(std::move(p));
    } else if (tok.rfind("inv:", 0) == 0) {
      w.tokens.emplace_back(InvertToken{parse_int(tok.substr(4), "inv")});
    } else if (tok.rfind("lmul:", 0) == 0) {
      const auto parts = split(tok.substr(5), ',');
      if (parts.size() != 2) {
        throw CosetError(Errc::schema_error, "lmul needs two indices");
      }
      w.tokens.emplace_back(LeftMultiplyToken{parse_int(parts[0], "lmul"),
                                              parse_int(parts[1], "lmul")});
    } else if (tok.size() >= 2 && tok[0] == 's' &&
               std::isdigit(static_cast<unsigned char>(tok[1]))) {
      int exponent = 1;
      std::string body = tok.substr(1);
      const auto caret = body.find('^');
      if (caret != std::string::npos) {
        const std::string e = body.substr(caret + 1);
        if (e == "-1") {
          exponent = -1;
        } else if (e == "1" || e == "+1") {
          exponent = 1;
        } else {
          throw CosetError(Errc::schema_error,
                           "braid exponent must be 1 or -1: '" + tok + "'");
        }
        body = body.substr(0, caret);
      }
      const int sigma = parse_int(body, "braid");
      if (sigma < 1) {
        throw CosetError(Errc::schema_error, "braid index must be >= 1");
      }
      w.tokens.emplace_back(BraidToken{sigma + 1, exponent});
    } else {
      throw CosetError(Errc::schema_error, "unknown token '" + tok + "'");
    }
  }
  return w;
}

std::string format_word(const GroupWord& w) {
  std::ostringstream os;
  bool first = true;
  for (const auto& tok : w.tokens) {
    if (!first) os << ' ';
    first = false;
    if (const auto* p = std::get_if<PermuteToken>(&tok)) {
      os << "perm:";
      for (size_t i = 0; i < p->images.size(); ++i) {
        os << (i ? "," : "") << p->images[i];
      }
    } else if (const auto* v = std::get_if<InvertToken>(&tok)) {
      os << "inv:" << v->k;
    } else if (const auto* l = std::get_if<LeftMultiplyToken>(&tok)) {
      os << "lmul:" << l->j << "," << l->k;
    } else if (const auto* b = std::get_if<BraidToken>(&tok)) {
      os << "s" << (b->k - 1);
      if (b->exponent == -1) os << "^-1";
    }
  }
  return os.str();
}

CosetTuple act_tuple(const CosetTuple& t, const GroupWord& w) {
  CosetTuple cur = normalize_leading(t);
  const int n = cur.size();
  std::vector<UnitQuaternion> g = cur.elements();

  for (const auto& tok : w.tokens) {
    if (const auto* p = std::get_if<PermuteToken>(&tok)) {
      if (static_cast<int>(p->images.size()) != n - 1) {
        throw CosetError(Errc::index_error,
                         "perm must list images for positions 2..n");
      }
      std::vector<bool> seen(n + 1, false);
      std::vector<UnitQuaternion> next = g;
      for (int k = 2; k <= n; ++k) {
        const int src = p->images[k - 2];
        check_position(src, n, "perm");
        if (seen[src]) {
          throw CosetError(Errc::index_error, "perm repeats a position");
        }
        seen[src] = true;
        next[k - 1] = g[src - 1];
      }
      g = std::move(next);
    } else if (const auto* v = std::get_if<InvertToken>(&tok)) {
      check_position(v->k, n, "inv");
      g[v->k - 1] = inverse(g[v->k - 1]);
    } else if (const auto* l = std::get_if<LeftMultiplyToken>(&tok)) {
      check_position(l->j, n, "lmul");
      check_position(l->k, n, "lmul");
      if (l->j == l->k) {
        throw CosetError(Errc::index_error, "lmul requires j != k");
      }
      g[l->k - 1] = compose(g[l->j - 1], g[l->k - 1]);
    } else if (const auto* b = std::get_if<BraidToken>(&tok)) {
      if (b->k < 2 || b->k + 1 > n) {
        throw CosetError(Errc::index_error,
                         "braid position out of range [2, n-1]");
      }
      UnitQuaternion& gk = g[b->k - 1];
      UnitQuaternion& gk1 = g[b->k];
      if (b->exponent >= 0) {
        const UnitQuaternion conj = compose(compose(gk, gk1), inverse(gk));
        gk1 = gk;
        gk = conj;
      } else {
        const UnitQuaternion conj = compose(compose(inverse(gk1), gk), gk1);
        gk = gk1;
        gk1 = conj;
      }
    }
  }
  return normalize_leading(CosetTuple(std::move(g)));
}

std::vector<int> word_permutation(const GroupWord& w, int n) {
  // source[pos - 2] = original position whose content (up to conjugation)
  // ends up at pos.
  std::vector<int> source(n - 1);
  std::iota(source.begin(), source.end(), 2);
  for (const auto& tok : w.tokens) {
    std::vector<int> step(n - 1);
    std::iota(step.begin(), step.end(), 2);
    if (const auto* p = std::get_if<PermuteToken>(&tok)) {
      if (static_cast<int>(p->images.size()) != n - 1) {
        throw CosetError(Errc::index_error,
                         "perm must list images for positions 2..n");
      }
      step = p->images;
    } else if (const auto* b = std::get_if<BraidToken>(&tok)) {
      if (b->k < 2 || b->k + 1 > n) {
        throw CosetError(Errc::index_error,
                         "braid position out of range [2, n-1]");
      }
      std::swap(step[b->k - 2], step[b->k - 1]);
    }
    std::vector<int> composed(n - 1);
    for (int pos = 2; pos <= n; ++pos) {
      composed[pos - 2] = source[step[pos - 2] - 2];
    }
    source = std::move(composed);
  }
  return source;
}

SpectralForm form_invert(const SpectralForm& f) {
  const int n = f.size();
  if (n < 3) {
    throw std::invalid_argument("form_invert requires n >= 3");
  }
  Eigen::MatrixXd s = f.matrix();
  const double p = s(0, 1);
  for (int j = 2; j < n; ++j) {
    const double qj = s(0, j);
    s(1, j) = s(j, 1) = -s(1, j) + 2.0 * p * qj;
  }
  return SpectralForm(std::move(s));
}

FormActionResult form_left_multiply(const SheetedForm& sf, SignPolicy policy) {
  const int n = sf.form.size();
  if (n < 3) {
    throw std::invalid_argument("form_left_multiply requires n >= 3");
  }
  const ValidationReport rep = validate_form(sf.form);
  if (!rep.pass) {
    throw CosetError(Errc::invalid_form,
                     "form_left_multiply: " + rep.summary());
  }
  GroupWord word;
  word.tokens.emplace_back(LeftMultiplyToken{2, 3});
  const CosetTuple acted = act_tuple(reconstruct(sf), word);

  FormActionResult out{SheetedForm{sf.form, 0}, false, {}};
  if (sf.sheet == 0) {
    out.result = sheeted_form(acted);
    out.rank_degenerate_fallback = true;
    return out;
  }

  const Eigen::MatrixXd base = sf.form.matrix();
  Eigen::MatrixXd s = base;
  const double p = base(0, 1), q1 = base(0, 2), r1 = base(1, 2);
  s(0, 2) = s(2, 0) = -r1 + 2.0 * p * q1;
  s(1, 2) = s(2, 1) = q1;

  std::vector<int> cols(n >= 4 ? n - 3 : 0);
  std::iota(cols.begin(), cols.end(), 3);
  std::optional<std::vector<int>> theta;
  if (policy == SignPolicy::theta_rule) {
    theta = theta_signs_for(sf, cols);
  }
  const SpectralForm oracle = spectral_form(acted);
  for (size_t c = 0; c < cols.size(); ++c) {
    const int j = cols[c];
    const RadicalEntry e = left_multiply_entry(base, j);
    const int sign = theta ? (*theta)[c] : pick_sign(e, oracle(2, j));
    s(2, j) = s(j, 2) = e.base + sign * e.radical;
    out.branch_signs.push_back(sign);
  }

  SpectralForm result_form{std::move(s)};
  int out_sheet = sheet(acted);
  if (numerical_rank(result_form) <= 3) out_sheet = 0;
  out.result = SheetedForm{std::move(result_form), out_sheet};
  return out;
}

FormActionResult form_braid_general(const SheetedForm& sf, int k,
                                    SignPolicy policy) {
  const int n = sf.form.size();
  if (k < 1 || k + 1 > n - 1) {
    throw CosetError(Errc::index_error,
                     "braid index must satisfy 1 <= k <= n-2");
  }
  const ValidationReport rep = validate_form(sf.form);
  if (!rep.pass) {
    throw CosetError(Errc::invalid_form,
                     "form_braid_general: " + rep.summary());
  }
  GroupWord word;
  word.tokens.emplace_back(BraidToken{k + 1, +1});
  const CosetTuple acted = act_tuple(reconstruct(sf), word);

  FormActionResult out{SheetedForm{sf.form, 0}, false, {}};
  if (sf.sheet == 0) {
    out.result = sheeted_form(acted);
    out.rank_degenerate_fallback = true;
    return out;
  }

  const Eigen::MatrixXd base = sf.form.matrix();
  Eigen::MatrixXd s = base;
  s(0, k) = s(k, 0) = base(0, k + 1);
  s(0, k + 1) = s(k + 1, 0) = base(0, k);

  std::vector<int> cols;
  for (int j = 1; j < n; ++j) {
    if (j != k && j != k + 1) cols.push_back(j);
  }

  // The paper's theta comparator is worked out for the first generator,
  // where the conjugating slot is the diagonalized one; other k resolve
  // against the oracle.
  std::optional<std::vector<int>> theta;
  if (policy == SignPolicy::theta_rule && k == 1) {
    theta = theta_signs_for(sf, cols);
  }
  const SpectralForm oracle = spectral_form(acted);
  for (size_t c = 0; c < cols.size(); ++c) {
    const int j = cols[c];
    s(k + 1, j) = s(j, k + 1) = base(k, j);
    const RadicalEntry e = braid_entry(base, k, j);
    const int sign = theta ? (*theta)[c] : pick_sign(e, oracle(k, j));
    s(k, j) = s(j, k) = e.base + sign * e.radical;
    out.branch_signs.push_back(sign);
  }

  SpectralForm result_form{std::move(s)};
  int out_sheet = sheet(acted);
  if (numerical_rank(result_form) <= 3) out_sheet = 0;
  out.result = SheetedForm{std::move(result_form), out_sheet};
  return out;
}

FormActionResult form_braid(const SheetedForm& sf, int k, SignPolicy policy) {
  if (sf.form.size() != 5) {
    throw std::invalid_argument("form_braid requires n = 5");
  }
  return form_braid_general(sf, k, policy);
}

CheckReport artin_check(const GroupWord& w, int n, int trials, Rng& rng) {
  CheckReport rep;
  rep.name = "artin conditions";
  rep.trials = trials;
  std::vector<int> xi_first;
  bool xi_stable = true;
  for (int trial = 0; trial < trials; ++trial) {
    const CosetTuple t = normalize_leading(sample_tuple(n, rng));
    const CosetTuple u = act_tuple(t, w);

    // Condition 2: the product of the free slots is preserved as a matrix.
    const UnitQuaternion p_before = product_of_free_slots(t);
    const UnitQuaternion p_after = product_of_free_slots(u);
    double err = 0.0;
    const auto v1 = p_before.vec();
    const auto v2 = p_after.vec();
    for (int c = 0; c < 4; ++c) {
      err = std::max(err, std::fabs(v1[c] - v2[c]));
    }
    rep.max_error = std::max(rep.max_error, err);
    bool ok = err <= 1e-10;

    // Condition 1: each image slot conjugate to some original slot
    // (matching eigen-angles, bijectively).
    std::vector<int> xi(n - 1, -1);
    std::vector<bool> used(n - 1, false);
    for (int f = 1; f < n && ok; ++f) {
      const double phi = eigen_angle(u[f]);
      int best = -1;
      double best_diff = 1e-8;
      for (int g = 1; g < n; ++g) {
        if (used[g - 1]) continue;
        const double d = std::fabs(eigen_angle(t[g]) - phi);
        if (d < best_diff) {
          best_diff = d;
          best = g;
        }
      }
      if (best < 0) {
        ok = false;
      } else {
        used[best - 1] = true;
        xi[f - 1] = best;
      }
    }
    if (ok) {
      if (xi_first.empty()) {
        xi_first = xi;
      } else if (xi != xi_first) {
        xi_stable = false;
      }
    } else {
      ++rep.failures;
    }
  }
  rep.pass = rep.failures == 0 && xi_stable;
  std::ostringstream note;
  note << "xi =";
  for (int v : xi_first) note << ' ' << v;
  if (!xi_stable) note << " (unstable across trials)";
  rep.note = note.str();
  return rep;
}

CheckReport verify_braid_relations(int n, int trials, Rng& rng) {
  if (n < 4) {
    throw std::invalid_argument("braid relations need n >= 4");
  }
  CheckReport rep;
  rep.name = "braid relations";
  rep.trials = trials;
  auto braid = [](int pos) {
    GroupWord w;
    w.tokens.emplace_back(BraidToken{pos, +1});
    return w;
  };
  auto concat = [](std::initializer_list<GroupWord> words) {
    GroupWord out;
    for (const auto& w : words) {
      out.tokens.insert(out.tokens.end(), w.tokens.begin(), w.tokens.end());
    }
    return out;
  };
  for (int trial = 0; trial < trials; ++trial) {
    const CosetTuple t = normalize_leading(sample_tuple(n, rng));
    bool ok = true;
    for (int pos = 2; pos + 2 <= n - 1 + 1 && ok; ++pos) {
      if (pos + 1 > n - 1) break;
      const GroupWord lhs =
          concat({braid(pos), braid(pos + 1), braid(pos)});
      const GroupWord rhs =
          concat({braid(pos + 1), braid(pos), braid(pos + 1)});
      const auto res = equivalent(act_tuple(t, lhs), act_tuple(t, rhs));
      rep.max_error = std::max(rep.max_error, res.zeta_distance);
      ok = ok && res.equivalent;
    }
    for (int pi = 2; pi <= n - 1 && ok; ++pi) {
      for (int pj = pi + 2; pj <= n - 1 && ok; ++pj) {
        const GroupWord lhs = concat({braid(pi), braid(pj)});
        const GroupWord rhs = concat({braid(pj), braid(pi)});
        const auto res = equivalent(act_tuple(t, lhs), act_tuple(t, rhs));
        rep.max_error = std::max(rep.max_error, res.zeta_distance);
        ok = ok && res.equivalent;
      }
    }
    if (!ok) ++rep.failures;
  }
  rep.pass = rep.failures == 0;
  return rep;
}

GroupWord kernel_word(int n) {
  // k = n - 1 strands: ((s1..s_{k-1})(s1..s_{k-2})...s1)^2 in sigma
  // indices, i.e. positions 2..m+1.
  const int k = n - 1;
  GroupWord w;
  for (int rep = 0; rep < 2; ++rep) {
    for (int block = k - 1; block >= 1; --block) {
      for (int i = 1; i <= block; ++i) {
        w.tokens.emplace_back(BraidToken{i + 1, +1});
      }
    }
  }
  return w;
}

CheckReport verify_kernel_element(int n, int trials, Rng& rng) {
  CheckReport rep;
  rep.name = "kernel word acts trivially";
  rep.trials = trials;
  const GroupWord w = kernel_word(n);
  for (int trial = 0; trial < trials; ++trial) {
    const CosetTuple t = normalize_leading(sample_tuple(n, rng));
    const auto res = equivalent(act_tuple(t, w), t);
    rep.max_error = std::max(rep.max_error, res.zeta_distance);
    if (!res.equivalent) ++rep.failures;
  }
  rep.pass = rep.failures == 0;
  std::ostringstream note;
  note << "word " << format_word(w);
  rep.note = note.str();
  return rep;
}

ActionsOracleReport verify_actions_oracle(const ActionsOracleOptions& opts) {
  const int threads = std::max(1, opts.threads);
  std::vector<ActionsOracleReport> parts(threads);

  auto worker = [&](int w, std::int64_t count) {
    Rng rng(Rng::derive(opts.seed, static_cast<std::uint64_t>(w)));
    ActionsOracleReport& part = parts[w];
    GroupWord inv_word, lmul_word, braid_word;
    inv_word.tokens.emplace_back(InvertToken{2});
    lmul_word.tokens.emplace_back(LeftMultiplyToken{2, 3});
    braid_word.tokens.emplace_back(BraidToken{2, +1});

    for (std::int64_t i = 0; i < count; ++i) {
      const CosetTuple t = normalize_leading(sample_tuple(opts.n, rng));
      const SheetedForm sf = sheeted_form(t);
      if (sf.sheet == 0) {
        ++part.degenerate_skipped;
        continue;
      }
      ++part.trials;

      // g_2 inversion: purely algebraic map.
      {
        const SpectralForm closed = form_invert(sf.form);
        const SpectralForm oracle = spectral_form(act_tuple(t, inv_word));
        part.max_invert_error = std::max(
            part.max_invert_error, closed.max_entry_distance(oracle));
      }

      // Left multiplication and the first braid generator: the entrywise
      // check runs with the oracle-resolved branch; the theta rule is
      // scored against that branch separately, excluding near-degenerate
      // phases.
      std::optional<CanonicalCoordinates> coords;
      try {
        coords = resolve_coordinates(sf.form, sf.sheet);
      } catch (const CosetError&) {
        coords = std::nullopt;
      }

      auto score_signs = [&](const std::vector<int>& oracle_signs) {
        for (size_t c = 0; c < oracle_signs.size(); ++c) {
          if (!coords) {
            ++part.sign_excluded;
            continue;
          }
          const double diff = coords->theta[0] - coords->theta[c + 1];
          if (std::fabs(std::sin(diff)) <= opts.sin_exclusion) {
            ++part.sign_excluded;
            continue;
          }
          const int theta_sign = diff >= 0.0 ? -1 : +1;
          ++part.sign_checked;
          if (theta_sign == oracle_signs[c]) ++part.sign_agreed;
        }
      };

      {
        const FormActionResult r =
            form_left_multiply(sf, SignPolicy::oracle);
        const SpectralForm oracle = spectral_form(act_tuple(t, lmul_word));
        part.max_left_multiply_error =
            std::max(part.max_left_multiply_error,
                     r.result.form.max_entry_distance(oracle));
        score_signs(r.branch_signs);
      }
      {
        const FormActionResult r =
            form_braid_general(sf, 1, SignPolicy::oracle);
        const SpectralForm oracle = spectral_form(act_tuple(t, braid_word));
        part.max_braid_error = std::max(
            part.max_braid_error, r.result.form.max_entry_distance(oracle));
        score_signs(r.branch_signs);
      }
    }
  };

  if (threads == 1) {
    worker(0, opts.trials);
  } else {
    std::vector<std::thread> pool;
    const std::int64_t base_count = opts.trials / threads;
    const std::int64_t rem = opts.trials % threads;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back(worker, w, base_count + (w < rem ? 1 : 0));
    }
    for (auto& th : pool) th.join();
  }

  ActionsOracleReport rep;
  for (const auto& p : parts) {
    rep.trials += p.trials;
    rep.degenerate_skipped += p.degenerate_skipped;
    rep.max_invert_error = std::max(rep.max_invert_error, p.max_invert_error);
    rep.max_left_multiply_error =
        std::max(rep.max_left_multiply_error, p.max_left_multiply_error);
    rep.max_braid_error = std::max(rep.max_braid_error, p.max_braid_error);
    rep.sign_checked += p.sign_checked;
    rep.sign_agreed += p.sign_agreed;
    rep.sign_excluded += p.sign_excluded;
  }
  rep.entries_pass = rep.max_invert_error <= opts.entry_tol &&
                     rep.max_left_multiply_error <= opts.entry_tol &&
                     rep.max_braid_error <= opts.entry_tol;
  rep.sign_rule_pass = rep.agreement() >= opts.min_agreement;
  rep.pass = rep.entries_pass && rep.sign_rule_pass;
  return rep;
}

}  // namespace su2cosets

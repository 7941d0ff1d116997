#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "su2cosets/actions.hpp"
#include "su2cosets/errors.hpp"
#include "su2cosets/haar.hpp"
#include "test_support.hpp"

namespace sc = su2cosets;

namespace {

sc::GroupWord word_of(std::initializer_list<sc::GeneratorToken> toks) {
  sc::GroupWord w;
  w.tokens = toks;
  return w;
}

}  // namespace

TEST_CASE("word parsing and formatting") {
  const auto w = sc::parse_word("perm:2,4,3,5 inv:2 lmul:2,3 s1 s2^-1");
  REQUIRE(w.tokens.size() == 5);
  CHECK(sc::format_word(w) == "perm:2,4,3,5 inv:2 lmul:2,3 s1 s2^-1");
  CHECK(std::get<sc::BraidToken>(w.tokens[3]).k == 2);
  CHECK(std::get<sc::BraidToken>(w.tokens[4]).k == 3);
  CHECK(std::get<sc::BraidToken>(w.tokens[4]).exponent == -1);

  CHECK_THROWS_AS(sc::parse_word("qzx"), sc::CosetError);
  CHECK_THROWS_AS(sc::parse_word("s0"), sc::CosetError);
  CHECK_THROWS_AS(sc::parse_word("s1^2"), sc::CosetError);
  CHECK_THROWS_AS(sc::parse_word("inv:x"), sc::CosetError);
  CHECK_THROWS_AS(sc::parse_word("lmul:2"), sc::CosetError);
}

TEST_CASE("act_tuple token semantics") {
  sc::Rng rng(163);
  const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(5, rng));

  SUBCASE("empty word is the identity") {
    const auto u = sc::act_tuple(t, {});
    CHECK(sc::max_componentwise_distance(t, u) == 0.0);
  }

  SUBCASE("inversion is an involution") {
    const auto w = word_of({sc::InvertToken{3}, sc::InvertToken{3}});
    CHECK(sc::max_componentwise_distance(t, sc::act_tuple(t, w)) <= 1e-12);
  }

  SUBCASE("braid followed by its inverse is the identity") {
    const auto w =
        word_of({sc::BraidToken{3, +1}, sc::BraidToken{3, -1}});
    CHECK(sc::max_componentwise_distance(t, sc::act_tuple(t, w)) <= 1e-12);
  }

  SUBCASE("permutation moves elements as documented") {
    const auto w = word_of({sc::PermuteToken{{2, 4, 3, 5}}});
    const auto u = sc::act_tuple(t, w);
    CHECK(sc::approx_equal(u[1], t[1], 0.0));
    CHECK(sc::approx_equal(u[2], t[3], 0.0));
    CHECK(sc::approx_equal(u[3], t[2], 0.0));
    CHECK(sc::approx_equal(u[4], t[4], 0.0));
  }

  SUBCASE("left multiplication composes the named slots") {
    const auto w = word_of({sc::LeftMultiplyToken{2, 3}});
    const auto u = sc::act_tuple(t, w);
    CHECK(sc::approx_equal(u[2], sc::compose(t[1], t[2]), 1e-12));
  }

  SUBCASE("index validation") {
    CHECK_THROWS_AS(sc::act_tuple(t, word_of({sc::InvertToken{1}})),
                    sc::CosetError);
    CHECK_THROWS_AS(sc::act_tuple(t, word_of({sc::InvertToken{6}})),
                    sc::CosetError);
    CHECK_THROWS_AS(sc::act_tuple(t, word_of({sc::BraidToken{5, 1}})),
                    sc::CosetError);
    CHECK_THROWS_AS(sc::act_tuple(t, word_of({sc::LeftMultiplyToken{3, 3}})),
                    sc::CosetError);
  }
}

TEST_CASE("braid relations hold elementwise on tuples") {
  sc::Rng rng(167);
  for (int i = 0; i < 100; ++i) {
    const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(5, rng));
    const auto lhs = sc::act_tuple(
        t, word_of({sc::BraidToken{2, 1}, sc::BraidToken{3, 1},
                    sc::BraidToken{2, 1}}));
    const auto rhs = sc::act_tuple(
        t, word_of({sc::BraidToken{3, 1}, sc::BraidToken{2, 1},
                    sc::BraidToken{3, 1}}));
    CHECK(sc::max_componentwise_distance(lhs, rhs) <= 1e-12);
    const auto lhs2 = sc::act_tuple(
        t, word_of({sc::BraidToken{2, 1}, sc::BraidToken{4, 1}}));
    const auto rhs2 = sc::act_tuple(
        t, word_of({sc::BraidToken{4, 1}, sc::BraidToken{2, 1}}));
    CHECK(sc::max_componentwise_distance(lhs2, rhs2) <= 1e-12);
  }
}

TEST_CASE("form_invert") {
  SUBCASE("worked value: p = 0.5, q = 0.2, r = 0.7 gives -0.5") {
    Eigen::MatrixXd s(3, 3);
    s << 1.0, 0.5, 0.2, 0.5, 1.0, 0.7, 0.2, 0.7, 1.0;
    const auto out = sc::form_invert(sc::SpectralForm(s));
    CHECK(out(1, 2) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(out(0, 1) == 0.5);
    CHECK(out(0, 2) == 0.2);
  }

  SUBCASE("involution") {
    sc::Rng rng(173);
    for (int i = 0; i < 100; ++i) {
      const auto f = sc::spectral_form(sc::sample_tuple(5, rng));
      const auto twice = sc::form_invert(sc::form_invert(f));
      CHECK(twice.max_entry_distance(f) <= 1e-15);
    }
  }

  SUBCASE("matrix oracle over random tuples") {
    sc::Rng rng(179);
    const auto w = word_of({sc::InvertToken{2}});
    double max_err = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(5, rng));
      const auto closed = sc::form_invert(sc::spectral_form(t));
      const auto oracle = sc::spectral_form(sc::act_tuple(t, w));
      max_err = std::max(max_err, closed.max_entry_distance(oracle));
    }
    CHECK(max_err <= 1e-10);
  }
}

TEST_CASE("form_left_multiply") {
  sc::Rng rng(181);
  const auto w = word_of({sc::LeftMultiplyToken{2, 3}});

  SUBCASE("matrix oracle, oracle-resolved branch") {
    double max_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(5, rng));
      const auto sf = sc::sheeted_form(t);
      if (sf.sheet == 0) continue;
      const auto r = sc::form_left_multiply(sf, sc::SignPolicy::oracle);
      const auto oracle = sc::spectral_form(sc::act_tuple(t, w));
      max_err = std::max(max_err, r.result.form.max_entry_distance(oracle));
      // Transported sheet agrees with the acted tuple.
      CHECK(r.result.sheet == sc::sheet(sc::act_tuple(t, w)));
    }
    CHECK(max_err <= 1e-8);
  }

  SUBCASE("theta-rule branch matches the oracle branch away from degeneracy") {
    int checked = 0, agreed = 0;
    for (int i = 0; i < 500; ++i) {
      const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(5, rng));
      const auto sf = sc::sheeted_form(t);
      if (sf.sheet == 0) continue;
      sc::CanonicalCoordinates coords;
      try {
        coords = sc::resolve_coordinates(sf.form, sf.sheet);
      } catch (const sc::CosetError&) {
        continue;
      }
      const auto r_theta = sc::form_left_multiply(sf, sc::SignPolicy::theta_rule);
      const auto r_oracle = sc::form_left_multiply(sf, sc::SignPolicy::oracle);
      REQUIRE(r_theta.branch_signs.size() == r_oracle.branch_signs.size());
      for (size_t c = 0; c < r_theta.branch_signs.size(); ++c) {
        const double diff = coords.theta[0] - coords.theta[c + 1];
        if (std::fabs(std::sin(diff)) <= 1e-6) continue;
        ++checked;
        if (r_theta.branch_signs[c] == r_oracle.branch_signs[c]) ++agreed;
      }
    }
    CHECK(checked > 500);
    CHECK(agreed == checked);
  }

  SUBCASE("p never changes") {
    for (int i = 0; i < 50; ++i) {
      const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(5, rng));
      const auto sf = sc::sheeted_form(t);
      if (sf.sheet == 0) continue;
      const auto r = sc::form_left_multiply(sf, sc::SignPolicy::oracle);
      CHECK(r.result.form(0, 1) == sf.form(0, 1));
    }
  }

  SUBCASE("diagonal third element: the radical vanishes, algebra is exact") {
    // With b = 0 in the third slot the configuration of (1, g2, g3) is
    // planar, every radicand vanishes and the closed form is purely
    // algebraic (the q~_1 = -r_1 + 2 p q_1 line in particular).
    for (int i = 0; i < 50; ++i) {
      std::vector<sc::UnitQuaternion> els;
      els.push_back(sc::UnitQuaternion::identity());
      els.push_back(test_support::diag_element(rng.uniform(0.3, 2.8)));
      els.push_back(sc::UnitQuaternion::from_components(
          std::cos(rng.uniform(0, 3)), std::sin(rng.uniform(0, 3)), 0, 0));
      els.push_back(sc::haar_sample(rng));
      els.push_back(sc::haar_sample(rng));
      const sc::CosetTuple t(els);
      const auto sf = sc::sheeted_form(t);
      if (sf.sheet == 0) continue;
      const auto r = sc::form_left_multiply(sf, sc::SignPolicy::theta_rule);
      const auto oracle = sc::spectral_form(sc::act_tuple(t, w));
      CHECK(r.result.form.max_entry_distance(oracle) <= 1e-9);
    }
  }

  SUBCASE("sheet-0 input falls back to the matrix path") {
    for (int i = 0; i < 20; ++i) {
      const auto t = test_support::random_rank3_tuple(5, rng);
      const auto sf = sc::sheeted_form(sc::normalize_leading(t));
      REQUIRE(sf.sheet == 0);
      const auto r = sc::form_left_multiply(sf);
      CHECK(r.rank_degenerate_fallback);
      const auto oracle =
          sc::spectral_form(sc::act_tuple(sc::normalize_leading(t), w));
      CHECK(r.result.form.max_entry_distance(oracle) <= 1e-10);
    }
  }
}

TEST_CASE("form_braid") {
  sc::Rng rng(191);

  SUBCASE("matrix oracle for sigma_1 on n = 5") {
    const auto w = word_of({sc::BraidToken{2, +1}});
    double max_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(5, rng));
      const auto sf = sc::sheeted_form(t);
      if (sf.sheet == 0) continue;
      const auto r = sc::form_braid(sf, 1, sc::SignPolicy::oracle);
      const auto oracle = sc::spectral_form(sc::act_tuple(t, w));
      max_err = std::max(max_err, r.result.form.max_entry_distance(oracle));
    }
    CHECK(max_err <= 1e-8);
  }

  SUBCASE("matrix oracle for general k on n = 6") {
    for (int k = 1; k <= 4; ++k) {
      const auto w = word_of({sc::BraidToken{k + 1, +1}});
      double max_err = 0.0;
      for (int i = 0; i < 300; ++i) {
        const sc::CosetTuple t =
            sc::normalize_leading(sc::sample_tuple(6, rng));
        const auto sf = sc::sheeted_form(t);
        if (sf.sheet == 0) continue;
        const auto r = sc::form_braid_general(sf, k, sc::SignPolicy::oracle);
        const auto oracle = sc::spectral_form(sc::act_tuple(t, w));
        max_err = std::max(max_err, r.result.form.max_entry_distance(oracle));
      }
      CHECK(max_err <= 1e-8);
    }
  }

  SUBCASE("untouched block entries are copied verbatim") {
    const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(6, rng));
    const auto sf = sc::sheeted_form(t);
    REQUIRE(sf.sheet != 0);
    const auto r = sc::form_braid_general(sf, 2, sc::SignPolicy::oracle);
    // Columns 2, 3 move; everything among {1, 4, 5} is fixed.
    CHECK(r.result.form(1, 4) == sf.form(1, 4));
    CHECK(r.result.form(1, 5) == sf.form(1, 5));
    CHECK(r.result.form(4, 5) == sf.form(4, 5));
    CHECK(r.result.form(0, 1) == sf.form(0, 1));
    // The h_{k,k+1} entry survives and the p pair swaps.
    CHECK(r.result.form(2, 3) == sf.form(2, 3));
    CHECK(r.result.form(0, 2) == sf.form(0, 3));
    CHECK(r.result.form(0, 3) == sf.form(0, 2));
  }

  SUBCASE("braids preserve the eigen-angle multiset") {
    const auto w = word_of({sc::BraidToken{3, +1}});
    for (int i = 0; i < 100; ++i) {
      const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(5, rng));
      const auto u = sc::act_tuple(t, w);
      std::vector<double> before, after;
      for (int j = 1; j < 5; ++j) {
        before.push_back(sc::eigen_angle(t[j]));
        after.push_back(sc::eigen_angle(u[j]));
      }
      std::sort(before.begin(), before.end());
      std::sort(after.begin(), after.end());
      for (int j = 0; j < 4; ++j) {
        CHECK(after[j] == doctest::Approx(before[j]).epsilon(1e-12));
      }
    }
  }

  SUBCASE("braids preserve the total product exactly") {
    const auto w = word_of({sc::BraidToken{2, +1}, sc::BraidToken{4, -1},
                            sc::BraidToken{3, +1}});
    for (int i = 0; i < 100; ++i) {
      const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(6, rng));
      const auto u = sc::act_tuple(t, w);
      auto product = [](const sc::CosetTuple& x) {
        sc::UnitQuaternion p = sc::UnitQuaternion::identity();
        for (int j = 1; j < x.size(); ++j) p = sc::compose(p, x[j]);
        return p;
      };
      CHECK(sc::approx_equal(product(t), product(u), 1e-10));
    }
  }
}

TEST_CASE("artin_check") {
  sc::Rng rng(193);

  SUBCASE("single braid generator passes with xi a transposition") {
    const auto w = word_of({sc::BraidToken{3, +1}});
    const auto rep = sc::artin_check(w, 5, 20, rng);
    CHECK(rep.pass);
    CHECK(rep.note == "xi = 1 3 2 4");
  }

  SUBCASE("empty word passes with identity xi") {
    const auto rep = sc::artin_check({}, 4, 10, rng);
    CHECK(rep.pass);
    CHECK(rep.note == "xi = 1 2 3");
  }

  SUBCASE("a non-braid word generically fails condition 2") {
    const auto w = word_of({sc::InvertToken{2}});
    const auto rep = sc::artin_check(w, 4, 10, rng);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_error > 1e-6);
  }
}

TEST_CASE("pure braid words preserve slotwise eigen-angles") {
  sc::Rng rng(197);
  const auto w = word_of({sc::BraidToken{2, +1}, sc::BraidToken{2, +1}});
  const auto perm = sc::word_permutation(w, 5);
  for (int pos = 2; pos <= 5; ++pos) {
    CHECK(perm[pos - 2] == pos);
  }
  for (int i = 0; i < 100; ++i) {
    const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(5, rng));
    const auto u = sc::act_tuple(t, w);
    for (int j = 1; j < 5; ++j) {
      CHECK(sc::eigen_angle(u[j]) ==
            doctest::Approx(sc::eigen_angle(t[j])).epsilon(1e-12));
    }
  }
}

TEST_CASE("verify_braid_relations and negative control") {
  sc::Rng rng(199);
  const auto rep = sc::verify_braid_relations(5, 100, rng);
  CHECK(rep.pass);
  CHECK(rep.failures == 0);

  // Adjacent generators do not commute: sigma_1 sigma_2 != sigma_2 sigma_1
  // on generic tuples.
  int distinct = 0;
  for (int i = 0; i < 20; ++i) {
    const sc::CosetTuple t = sc::normalize_leading(sc::sample_tuple(5, rng));
    const auto lhs = sc::act_tuple(
        t, word_of({sc::BraidToken{2, 1}, sc::BraidToken{3, 1}}));
    const auto rhs = sc::act_tuple(
        t, word_of({sc::BraidToken{3, 1}, sc::BraidToken{2, 1}}));
    if (!sc::equivalent(lhs, rhs).equivalent) ++distinct;
  }
  CHECK(distinct == 20);
}

TEST_CASE("kernel word acts trivially") {
  sc::Rng rng(211);
  SUBCASE("n = 3: sigma_1^2") {
    const auto w = sc::kernel_word(3);
    REQUIRE(w.tokens.size() == 2);
    const auto rep = sc::verify_kernel_element(3, 50, rng);
    CHECK(rep.pass);
  }
  SUBCASE("n = 4") {
    const auto rep = sc::verify_kernel_element(4, 50, rng);
    CHECK(rep.pass);
  }
  SUBCASE("n = 5") {
    const auto rep = sc::verify_kernel_element(5, 20, rng);
    CHECK(rep.pass);
  }
}

TEST_CASE("verify_actions_oracle harness at reduced scale") {
  sc::ActionsOracleOptions opts;
  opts.trials = 500;
  opts.seed = 99;
  const auto rep = sc::verify_actions_oracle(opts);
  CHECK(rep.pass);
  CHECK(rep.entries_pass);
  CHECK(rep.sign_rule_pass);
  CHECK(rep.max_invert_error <= 1e-8);
  CHECK(rep.max_left_multiply_error <= 1e-8);
  CHECK(rep.max_braid_error <= 1e-8);
  CHECK(rep.trials > 450);
}

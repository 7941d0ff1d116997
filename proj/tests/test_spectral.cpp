#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"
#include "su2cosets/canonical.hpp"
#include "su2cosets/errors.hpp"
#include "su2cosets/haar.hpp"
#include "su2cosets/spectral_form.hpp"
#include "test_support.hpp"

namespace sc = su2cosets;
using test_support::random_rank3_tuple;
using test_support::zeta_entry_by_determinant;

TEST_CASE("spectral_form trivial values") {
  const sc::UnitQuaternion id = sc::UnitQuaternion::identity();

  SUBCASE("all-identity triple gives the all-ones matrix") {
    const auto f = sc::spectral_form(sc::CosetTuple({id, id, id}));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(f(i, j) == doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }

  SUBCASE("p = cos(phi) for the diagonal pair") {
    const auto f = sc::spectral_form(sc::CosetTuple(
        {id, test_support::diag_element(3.141592653589793 / 2)}));
    CHECK(f(0, 1) == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("spectral_form matches the determinant polarization oracle") {
  sc::Rng rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const sc::CosetTuple t = sc::sample_tuple(5, rng);
    const auto f = sc::spectral_form(t);
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) {
        CHECK(f(i, j) ==
              doctest::Approx(zeta_entry_by_determinant(t, i, j))
                  .epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("zeta invariances") {
  sc::Rng rng(61);

  SUBCASE("transpose symmetry is exact") {
    for (int i = 0; i < 100; ++i) {
      const sc::CosetTuple t = sc::sample_tuple(4, rng);
      CHECK(sc::spectral_form(t).max_entry_distance(
                sc::spectral_form(sc::transpose_elementwise(t))) <= 1e-12);
    }
  }

  SUBCASE("left-right translation invariance") {
    for (int i = 0; i < 100; ++i) {
      const sc::CosetTuple t = sc::sample_tuple(5, rng);
      const auto u = sc::left_right_translate(t, sc::haar_sample(rng),
                                              sc::haar_sample(rng));
      CHECK(sc::spectral_form(t).max_entry_distance(sc::spectral_form(u)) <=
            1e-11);
    }
  }
}

TEST_CASE("sheet label") {
  sc::Rng rng(67);

  SUBCASE("diagonal tuples live on the branch surface") {
    std::vector<sc::UnitQuaternion> els;
    for (int k = 0; k < 4; ++k) {
      els.push_back(test_support::diag_element(0.3 + 0.4 * k));
    }
    CHECK(sc::sheet(sc::CosetTuple(els)) == 0);
  }

  SUBCASE("the coordinate-basis quadruple has sheet +1") {
    const sc::CosetTuple t({sc::UnitQuaternion{1, 0, 0, 0},
                            sc::UnitQuaternion{0, 1, 0, 0},
                            sc::UnitQuaternion{0, 0, 1, 0},
                            sc::UnitQuaternion{0, 0, 0, 1}});
    CHECK(sc::sheet(t) == 1);
  }

  SUBCASE("elementwise transpose flips the sheet of rank-4 tuples") {
    for (int i = 0; i < 100; ++i) {
      const sc::CosetTuple t = sc::sample_tuple(5, rng);
      const int s = sc::sheet(t);
      if (s == 0) continue;
      CHECK(sc::sheet(sc::transpose_elementwise(t)) == -s);
    }
  }

  SUBCASE("sheet is invariant under left-right translation") {
    for (int i = 0; i < 100; ++i) {
      const sc::CosetTuple t = sc::sample_tuple(4, rng);
      const auto u = sc::left_right_translate(t, sc::haar_sample(rng),
                                              sc::haar_sample(rng));
      CHECK(sc::sheet(u) == sc::sheet(t));
    }
  }
}

TEST_CASE("validate_form") {
  SUBCASE("all-ones matrix passes at rank 1") {
    const auto f = sc::SpectralForm(Eigen::MatrixXd::Ones(4, 4));
    const auto rep = sc::validate_form(f);
    CHECK(rep.pass);
    CHECK(rep.rank == 1);
  }

  SUBCASE("5x5 identity fails the rank bound") {
    const auto f = sc::SpectralForm(Eigen::MatrixXd::Identity(5, 5));
    const auto rep = sc::validate_form(f);
    CHECK_FALSE(rep.pass);
    CHECK(rep.rank == 5);
    CHECK_FALSE(rep.rank_ok);
    CHECK(rep.psd_ok);
  }

  SUBCASE("zeta of random tuples always validates") {
    sc::Rng rng(71);
    for (int i = 0; i < 1000; ++i) {
      const auto f = sc::spectral_form(sc::sample_tuple(6, rng));
      CHECK(sc::validate_form(f).pass);
    }
  }
}

TEST_CASE("reconstruct") {
  sc::Rng rng(73);

  SUBCASE("all-ones form reconstructs to a constant coset") {
    const sc::SheetedForm sf{sc::SpectralForm(Eigen::MatrixXd::Ones(4, 4)), 0};
    const auto t = sc::reconstruct(sf);
    CHECK(sc::spectral_form(t).max_entry_distance(sf.form) <= 1e-9);
  }

  SUBCASE("roundtrip lands in the same coset") {
    for (int i = 0; i < 200; ++i) {
      const sc::CosetTuple t = sc::sample_tuple(5, rng);
      const auto t2 = sc::reconstruct(sc::sheeted_form(t));
      CHECK(static_cast<bool>(sc::equivalent(t, t2)));
    }
  }

  SUBCASE("the two sheets yield distinct cosets over a rank-4 form") {
    for (int i = 0; i < 50; ++i) {
      const sc::CosetTuple t = sc::sample_tuple(5, rng);
      const auto f = sc::spectral_form(t);
      if (sc::numerical_rank(f) <= 3) continue;
      const auto plus = sc::reconstruct(sc::SheetedForm{f, 1});
      const auto minus = sc::reconstruct(sc::SheetedForm{f, -1});
      CHECK(sc::sheet(plus) == 1);
      CHECK(sc::sheet(minus) == -1);
      CHECK(sc::spectral_form(plus).max_entry_distance(f) <= 1e-9);
      CHECK(sc::spectral_form(minus).max_entry_distance(f) <= 1e-9);
      CHECK_FALSE(static_cast<bool>(sc::equivalent(plus, minus)));
      // Their canonical representatives genuinely differ.
      const auto cp = sc::canonicalize(plus);
      const auto cm = sc::canonicalize(minus);
      CHECK(sc::max_componentwise_distance(cp.tuple, cm.tuple) > 1e-6);
    }
  }

  SUBCASE("invalid forms are rejected") {
    const sc::SheetedForm sf{sc::SpectralForm(Eigen::MatrixXd::Identity(5, 5)),
                             0};
    CHECK_THROWS_AS(sc::reconstruct(sf), sc::CosetError);
  }

  SUBCASE("rank-decision band raises RankAmbiguous") {
    // Five vectors spanning five dimensions with the 4th and 5th
    // eigenvalues placed inside the threshold band.
    const double eps = std::sqrt(0.5 * sc::rank_eig_threshold(5));
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(5, 5);
    v.row(0) = Eigen::RowVectorXd::Unit(5, 0);
    v.row(1) = Eigen::RowVectorXd::Unit(5, 1);
    v.row(2) = Eigen::RowVectorXd::Unit(5, 2);
    v.row(3) = (Eigen::RowVectorXd::Unit(5, 0) +
                eps * Eigen::RowVectorXd::Unit(5, 3))
                   .normalized();
    v.row(4) = (Eigen::RowVectorXd::Unit(5, 1) +
                eps * Eigen::RowVectorXd::Unit(5, 4))
                   .normalized();
    const sc::SpectralForm f(v * v.transpose());
    bool threw = false;
    try {
      sc::reconstruct(sc::SheetedForm{f, 0});
    } catch (const sc::CosetError& e) {
      threw = true;
      CHECK(e.code() == sc::Errc::rank_ambiguous);
    }
    CHECK(threw);
  }
}

TEST_CASE("equivalent") {
  sc::Rng rng(79);

  SUBCASE("double-coset translates are equivalent") {
    for (int i = 0; i < 100; ++i) {
      const sc::CosetTuple t = sc::sample_tuple(4, rng);
      const auto u = sc::left_right_translate(t, sc::haar_sample(rng),
                                              sc::haar_sample(rng));
      CHECK(static_cast<bool>(sc::equivalent(t, u)));
    }
  }

  SUBCASE("rank-4 tuples are not equivalent to their transpose") {
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
      const sc::CosetTuple t = sc::sample_tuple(5, rng);
      if (sc::sheet(t) == 0) continue;
      ++checked;
      CHECK_FALSE(
          static_cast<bool>(sc::equivalent(t, sc::transpose_elementwise(t))));
    }
    CHECK(checked > 90);
  }

  SUBCASE("rank <= 3 tuples are equivalent to their transpose") {
    for (int i = 0; i < 100; ++i) {
      const sc::CosetTuple t = random_rank3_tuple(4, rng);
      CHECK(static_cast<bool>(
          sc::equivalent(t, sc::transpose_elementwise(t))));
    }
  }

  SUBCASE("borderline zeta distances are flagged") {
    const sc::CosetTuple t = sc::sample_tuple(4, rng);
    auto els = t.elements();
    els[2] = sc::compose(
        els[2], sc::UnitQuaternion::from_components(1.0, 3e-7, 0.0, 0.0));
    const sc::CosetTuple u(els);
    const auto res = sc::equivalent(t, u);
    CHECK_FALSE(res.equivalent);
    CHECK(res.borderline);
    CHECK(res.zeta_distance > 1e-8);
    CHECK(res.zeta_distance < 1e-6);
  }
}

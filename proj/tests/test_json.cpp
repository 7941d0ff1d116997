#include "doctest.h"
#include "su2cosets/errors.hpp"
#include "su2cosets/haar.hpp"
#include "su2cosets/json_io.hpp"
#include "su2cosets/polygon.hpp"
#include "test_support.hpp"

namespace sc = su2cosets;

TEST_CASE("encode/decode round-trips are bit-exact") {
  sc::Rng rng(239);
  for (int i = 0; i < 50; ++i) {
    const sc::CosetTuple t = sc::sample_tuple(2 + i % 5, rng);

    const auto t2 = sc::decode_tuple(sc::encode_tuple(t));
    CHECK(sc::max_componentwise_distance(t, t2) == 0.0);

    const auto sf = sc::sheeted_form(t);
    const auto sf2 = sc::decode_sheeted_form(sc::encode_sheeted_form(sf));
    CHECK(sf2.form.max_entry_distance(sf.form) == 0.0);
    CHECK(sf2.sheet == sf.sheet);

    const auto f2 = sc::decode_form(sc::encode_form(sf.form));
    CHECK(f2.max_entry_distance(sf.form) == 0.0);
  }
}

TEST_CASE("polygon JSON round-trip") {
  sc::Rng rng(241);
  const auto p = sc::sample_closed({1.0, 1.5, 2.0}, rng);
  const auto p2 = sc::decode_polygon(sc::encode_polygon(p));
  REQUIRE(p2.sides() == p.sides());
  for (int k = 0; k < p.sides(); ++k) {
    CHECK(p2.side_lengths[k] == p.side_lengths[k]);
    CHECK(p2.vertices[k].a_re == p.vertices[k].a_re);
    CHECK(p2.vertices[k].b_im == p.vertices[k].b_im);
  }
}

TEST_CASE("decoder schema violations") {
  CHECK_THROWS_AS(sc::decode_tuple("not json"), sc::CosetError);
  CHECK_THROWS_AS(sc::decode_tuple(R"({"n": 1, "elements": [[1,0,0,0]]})"),
                  sc::CosetError);
  CHECK_THROWS_AS(
      sc::decode_tuple(R"({"n": 2, "elements": [[1,0,0,0]]})"),
      sc::CosetError);
  CHECK_THROWS_AS(
      sc::decode_tuple(
          R"({"n": 2, "elements": [[1,0,0,0],[0.5,0.5,0.5,0.6]]})"),
      sc::CosetError);
  CHECK_THROWS_AS(sc::decode_form(R"({"n": 3, "upper": [0.1, 0.2]})"),
                  sc::CosetError);
  CHECK_THROWS_AS(sc::decode_form(R"({"n": 3, "upper": [0.1, 0.2, 1.5]})"),
                  sc::CosetError);

  // Sheet label must match the numerical rank.
  bool threw = false;
  try {
    sc::decode_sheeted_form(
        R"({"n": 3, "upper": [0.1, 0.2, 0.3], "sheet": 1})");
  } catch (const sc::CosetError& e) {
    threw = true;
    CHECK(e.code() == sc::Errc::invalid_form);
  }
  CHECK(threw);
}

TEST_CASE("17-significant-digit formatting") {
  CHECK(sc::format_double17(0.5) == "0.5");
  CHECK(sc::format_double17(1.0 / 3.0) == "0.33333333333333331");
}

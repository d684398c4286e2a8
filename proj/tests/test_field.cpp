#include <catch2/catch_amalgamated.hpp>

#include "qmx/field.hpp"

using namespace qmx;

namespace {

// Full multiplication table of GF(4) with modulus x^2+x+1, worked out by
// hand from w^2 = w+1. Codes: 0, 1, w = 2, w+1 = 3.
constexpr Code kGf4Mul[4][4] = {
    {0, 0, 0, 0},
    {0, 1, 2, 3},
    {0, 2, 3, 1},
    {0, 3, 1, 2},
};

std::vector<std::pair<std::uint32_t, std::uint32_t>> small_field_params() {
  // every (p, d) with p^d <= 2^8 for a few characteristics, plus one large prime
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ps;
  for (std::uint32_t d = 1; d <= 8; ++d) ps.push_back({2, d});
  for (std::uint32_t d = 1; d <= 5; ++d) ps.push_back({3, d});
  for (std::uint32_t d = 1; d <= 3; ++d) ps.push_back({5, d});
  for (std::uint32_t d = 1; d <= 2; ++d) ps.push_back({7, d});
  ps.push_back({11, 2});
  ps.push_back({13, 2});
  ps.push_back({251, 1});
  return ps;
}

}  // namespace

TEST_CASE("GF(4) matches the hand multiplication table", "[field]") {
  Field f = FieldContext::make(2, 2, std::vector<Code>{1, 1, 1});
  REQUIRE(f->order() == 4);
  for (Code a = 0; a < 4; ++a)
    for (Code b = 0; b < 4; ++b) {
      REQUIRE(f->mul(a, b) == kGf4Mul[a][b]);
      REQUIRE(f->mul_poly(a, b) == kGf4Mul[a][b]);
    }
  // w * w = w+1 is forced by the modulus; w * (w+1) = 1 so inv(w) = w+1
  REQUIRE(f->mul(2, 2) == 3);
  REQUIRE(f->inv(2) == 3);
  REQUIRE(f->inv(3) == 2);
  for (Code a = 0; a < 4; ++a) REQUIRE(f->mul(1, a) == a);
  REQUIRE_THROWS_AS(f->inv(0), std::invalid_argument);
  REQUIRE_THROWS_AS(f->div(1, 0), std::invalid_argument);
}

TEST_CASE("default moduli are pinned for the binary fields", "[field]") {
  REQUIRE(FieldContext::make(2, 2)->modulus_code() == 7);
  REQUIRE(FieldContext::make(2, 3)->modulus_code() == 11);
  REQUIRE(FieldContext::make(2, 4)->modulus_code() == 19);
  REQUIRE(FieldContext::make(2, 8)->modulus_code() == 285);
  REQUIRE(FieldContext::make(2, 2)->spec_string() == "2^2/7");
  REQUIRE(FieldContext::make(2, 1)->spec_string() == "2^1");
}

TEST_CASE("field construction rejects bad input", "[field]") {
  // x^2+1 = (x+1)^2 over GF(2)
  REQUIRE_THROWS_WITH(FieldContext::make(2, 2, std::vector<Code>{1, 0, 1}),
                      Catch::Matchers::ContainsSubstring("reducible"));
  REQUIRE_THROWS_AS(FieldContext::make(4, 1), std::invalid_argument);   // not prime
  REQUIRE_THROWS_AS(FieldContext::make(6, 2), std::invalid_argument);   // not prime
  REQUIRE_THROWS_AS(FieldContext::make(2, 33), std::invalid_argument);  // order cap
  REQUIRE_THROWS_AS(FieldContext::make(3, 21), std::invalid_argument);  // 3^21 > 2^32
  // non-monic
  REQUIRE_THROWS_AS(FieldContext::make(3, 2, std::vector<Code>{1, 0, 2}), std::invalid_argument);
}

TEST_CASE("field spec strings parse and round-trip", "[field]") {
  Field f = FieldContext::parse_spec("2^2/7");
  REQUIRE(*f == *FieldContext::make(2, 2));
  REQUIRE(FieldContext::parse_spec("2^4")->modulus_code() == 19);
  REQUIRE(FieldContext::parse_spec("3^1")->order() == 3);
  Field f9 = FieldContext::parse_spec("3^2");
  REQUIRE(FieldContext::parse_spec(f9->spec_string())->modulus() == f9->modulus());
  REQUIRE_THROWS_AS(FieldContext::parse_spec("2*2"), ParseError);
  REQUIRE_THROWS_AS(FieldContext::parse_spec("2^2/6"), std::invalid_argument);  // reducible
  REQUIRE_THROWS_AS(FieldContext::parse_spec("2^2x"), ParseError);
}

TEST_CASE("field axioms hold exhaustively on small fields", "[field]") {
  for (auto [p, d] : small_field_params()) {
    Field f = FieldContext::make(p, d);
    const std::uint64_t q = f->order();
    CAPTURE(p, d);
    bool assoc_ok = true, distrib_ok = true, comm_ok = true;
    if (q <= 256) {
      for (Code a = 0; a < q && assoc_ok && distrib_ok; ++a)
        for (Code b = 0; b < q; ++b) {
          for (Code c = 0; c < q; ++c) {
            if (f->mul(f->mul(a, b), c) != f->mul(a, f->mul(b, c))) assoc_ok = false;
            if (f->mul(a, f->add(b, c)) != f->add(f->mul(a, b), f->mul(a, c))) distrib_ok = false;
            if (f->add(f->add(a, b), c) != f->add(a, f->add(b, c))) assoc_ok = false;
          }
          if (f->mul(a, b) != f->mul(b, a) || f->add(a, b) != f->add(b, a)) comm_ok = false;
        }
    }
    REQUIRE(assoc_ok);
    REQUIRE(distrib_ok);
    REQUIRE(comm_ok);
    bool inverses_ok = true;
    for (Code a = 0; a < q; ++a) {
      if (f->add(a, f->neg(a)) != 0) inverses_ok = false;
      if (a != 0 && f->mul(a, f->inv(a)) != 1) inverses_ok = false;
      if (f->mul(1, a) != a || f->add(0, a) != a) inverses_ok = false;
    }
    REQUIRE(inverses_ok);
  }
}

TEST_CASE("Frobenius is additive", "[field]") {
  for (auto [p, d] : small_field_params()) {
    if (d == 1) continue;
    Field f = FieldContext::make(p, d);
    if (f->order() > 256) continue;
    CAPTURE(p, d);
    bool ok = true;
    for (Code a = 0; a < f->order(); ++a)
      for (Code b = 0; b < f->order(); ++b)
        if (f->frobenius(f->add(a, b)) != f->add(f->frobenius(a), f->frobenius(b))) ok = false;
    REQUIRE(ok);
  }
}

TEST_CASE("table and polynomial multiplication agree", "[field]") {
  for (auto [p, d] : small_field_params()) {
    if (d == 1) continue;
    Field f = FieldContext::make(p, d);
    if (f->order() > 256) continue;
    CAPTURE(p, d);
    bool ok = true;
    for (Code a = 0; a < f->order(); ++a)
      for (Code b = 0; b < f->order(); ++b)
        if (f->mul(a, b) != f->mul_poly(a, b)) ok = false;
    REQUIRE(ok);
  }
}

TEST_CASE("coords is the base-p digit expansion and is additive", "[field]") {
  Field f4 = FieldContext::make(2, 2);
  REQUIRE(f4->coords(2) == std::vector<Code>{0, 1});  // w
  REQUIRE(f4->coords(3) == std::vector<Code>{1, 1});  // w+1
  Field f16 = FieldContext::make(2, 4);
  REQUIRE(f16->coords(5) == std::vector<Code>{1, 0, 1, 0});
  for (auto* fp : {&f4, &f16}) {
    const Field& f = *fp;
    for (Code a = 0; a < f->order(); ++a) {
      REQUIRE(f->from_coords(f->coords(a)) == a);
      for (Code b = 0; b < f->order(); ++b) {
        auto ca = f->coords(a), cb = f->coords(b), cs = f->coords(f->add(a, b));
        for (std::size_t i = 0; i < ca.size(); ++i)
          REQUIRE(cs[i] == (ca[i] + cb[i]) % f->characteristic());
      }
    }
  }
  Field f9 = FieldContext::make(3, 2);
  for (Code a = 0; a < 9; ++a) REQUIRE(f9->from_coords(f9->coords(a)) == a);
}

TEST_CASE("powers and element degrees", "[field]") {
  Field f16 = FieldContext::make(2, 4);
  for (Code a = 1; a < 16; ++a) REQUIRE(f16->pow(a, 15) == 1);
  REQUIRE(f16->pow(0, 0) == 1);
  REQUIRE(f16->pow(0, 5) == 0);
  // x has degree 4; the two cube roots of unity span the GF(4) subfield
  REQUIRE(f16->element_degree(2) == 4);
  REQUIRE(f16->element_degree(0) == 1);
  REQUIRE(f16->element_degree(1) == 1);
  int degree2 = 0, degree4 = 0;
  for (Code a = 0; a < 16; ++a) {
    if (f16->element_degree(a) == 2) ++degree2;
    if (f16->element_degree(a) == 4) ++degree4;
  }
  REQUIRE(degree2 == 2);
  REQUIRE(degree4 == 12);
}

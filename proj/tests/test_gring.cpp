#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gbu/gring.hpp"

using namespace gbu;

static PolyF2 random_poly(std::mt19937& rng, int maxd, bool unit = false) {
  std::uniform_int_distribution<int> nterms(0, 6), omega(0, 4), exp(0, 2);
  std::vector<Monomial> ts;
  int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    std::vector<std::pair<int, int>> ch;
    for (int i = 1; i <= 3; ++i) {
      int e = exp(rng);
      if (e) ch.emplace_back(i, e);
    }
    ts.push_back(make_monomial(omega(rng), ch));
  }
  PolyF2 p(maxd, std::move(ts));
  if (unit && !p.contains(Monomial{})) p += PolyF2::one(maxd);
  return p;
}

TEST_CASE("monomial degree and twist") {
  Monomial m = make_monomial(3, {{1, 2}, {3, 1}});
  CHECK(m.degree() == 13);       // 3 + 2*2 + 6
  CHECK(m.chern_degree() == 5);  // 2 + 3
  CHECK(m.twist() == 0);         // (3 + 5) mod 2
  CHECK(make_monomial(1).twist() == 1);
  CHECK(make_monomial(0, {{2, 1}}).twist() == 0);
  CHECK(make_monomial(0, {{3, 1}}).twist() == 1);
  CHECK(Monomial{}.degree() == 0);
}

TEST_CASE("canonical order: degree, then omega descending, then cherns") {
  PolyF2 p = parse_poly("c1 + w^2 + c2 + w c1 + w^4 + 1", 8);
  CHECK(to_string(p) == "1 + w^2 + c1 + w c1 + w^4 + c2");
}

TEST_CASE("parse/print round trip") {
  for (const char* s :
       {"0", "1", "w", "w^2 + c1", "w^3 c1^2 c3", "1 + w + c1 + w c2",
        "w^8 + w^6 c1 + w^2 c1^3 + w^2 c3"}) {
    PolyF2 p = parse_poly(s, 16);
    CHECK(to_string(p) == s);
    CHECK(parse_poly(to_string(p), 16) == p);
  }
}

TEST_CASE("parser reports positions and rejects bad input") {
  CHECK_THROWS_AS(parse_poly("", 4), ParseError);
  CHECK_THROWS_AS(parse_poly("w^", 4), ParseError);
  CHECK_THROWS_AS(parse_poly("c0", 4), ParseError);
  CHECK_THROWS_AS(parse_poly("w + + c1", 4), ParseError);
  CHECK_THROWS_AS(parse_poly("w +", 4), ParseError);
  CHECK_THROWS_AS(parse_poly("x", 4), ParseError);
  CHECK_THROWS_AS(parse_poly("w^5", 4), ParseError);  // exceeds bound
  CHECK_THROWS_AS(parse_poly("0 + w", 4), ParseError);
  try {
    parse_poly("w + x", 4);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position == 4);
  }
  // duplicate factors multiply together
  CHECK(parse_poly("w w c1 c1", 8) == parse_poly("w^2 c1^2", 8));
  CHECK(parse_poly("w + w", 8).is_zero());
}

TEST_CASE("addition is symmetric difference") {
  PolyF2 a = parse_poly("w + c1", 6), b = parse_poly("c1 + c2", 6);
  CHECK(to_string(a + b) == "w + c2");
  CHECK((a + a).is_zero());
}

TEST_CASE("multiplication truncates above the bound") {
  PolyF2 a = parse_poly("w^3", 4), b = parse_poly("w^2 + 1", 4);
  CHECK(to_string(a * b) == "w^3");  // w^5 discarded
  CHECK_THROWS_AS(PolyF2::one(4) + PolyF2::one(5), DegreeMismatch);
}

TEST_CASE("frobenius and pow") {
  PolyF2 p = parse_poly("w + c1", 10);
  CHECK(p.frobenius() == parse_poly("w^2 + c1^2", 10));
  CHECK(p.pow(2) == p * p);
  CHECK(p.pow(5) == p * p * p * p * p);
  CHECK(p.pow(0) == PolyF2::one(10));
}

TEST_CASE("geometric inverse: frozen series") {
  // (1 + w)^{-1} = sum of all powers of w
  CHECK(to_string(parse_poly("1 + w", 5).geometric_inverse()) ==
        "1 + w + w^2 + w^3 + w^4 + w^5");
  // (1 + c1)^{-1}
  CHECK(to_string(parse_poly("1 + c1", 6).geometric_inverse()) ==
        "1 + c1 + c1^2 + c1^3");
  CHECK_THROWS_AS(parse_poly("w", 4).geometric_inverse(), std::invalid_argument);
}

TEST_CASE("ring axioms and inverse on random elements") {
  std::mt19937 rng(20260816);
  const int maxd = 9;
  for (int trial = 0; trial < 60; ++trial) {
    PolyF2 a = random_poly(rng, maxd), b = random_poly(rng, maxd),
           c = random_poly(rng, maxd);
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b).frobenius() == a.frobenius() + b.frobenius());
    PolyF2 u = random_poly(rng, maxd, /*unit=*/true);
    CHECK(u * u.geometric_inverse() == PolyF2::one(maxd));
  }
}

TEST_CASE("component extraction") {
  PolyF2 p = parse_poly("1 + w^2 + c1 + w^3", 6);
  CHECK(p.component(2) == parse_poly("w^2 + c1", 6));
  CHECK(p.component(5).is_zero());
  PolyF2 sum = PolyF2::zero(6);
  for (int k = 0; k <= 6; ++k) sum += p.component(k);
  CHECK(sum == p);
  CHECK(p.component(2).is_homogeneous());
  CHECK_FALSE(p.is_homogeneous());
}

TEST_CASE("twisted integral ring: torsion arithmetic") {
  PolyZTwisted x(8);
  x.add_free(make_monomial(0, {{1, 1}}), 3);
  x.add_torsion(make_monomial(2));
  CHECK_FALSE(x.is_zero());
  // doubling kills torsion, scales the free part
  PolyZTwisted y = x.scale(2);
  CHECK(y.torsion_part().is_zero());
  CHECK(y.free_part().at(make_monomial(0, {{1, 1}})) == 6);
  // free part must be w-free, torsion part divisible by w
  CHECK_THROWS_AS(x.add_free(make_monomial(1), 1), std::invalid_argument);
  CHECK_THROWS_AS(x.add_torsion(make_monomial(0, {{1, 1}})), std::invalid_argument);
  // mod-2 reduction sees odd free coefficients and all torsion
  CHECK(x.reduce_mod2() == parse_poly("w^2 + c1", 8));
  CHECK((x + x).reduce_mod2() == PolyF2::zero(8));
}

TEST_CASE("twisted slice") {
  PolyZTwisted x(8);
  x.add_free(make_monomial(0, {{1, 2}}), 1);   // degree 4, twist 0
  x.add_free(make_monomial(0, {{2, 1}}), -5);  // degree 4, twist 0
  x.add_torsion(make_monomial(3));             // degree 3, twist 1
  x.add_torsion(make_monomial(1, {{1, 1}}));   // degree 3, twist 0... (1+1)%2=0
  PolyZTwisted s = x.slice(4, 0);
  CHECK(s.free_part().size() == 2);
  CHECK(s.torsion_part().is_zero());
  CHECK(x.slice(3, 1).torsion_part() == parse_poly("w^3", 8));
  CHECK(x.slice(3, 0).torsion_part() == parse_poly("w c1", 8));
}

TEST_CASE("bockstein kills matching twist and multiplies by w otherwise") {
  // twist(w^2) = 0: the j = 1 operator sends it to w^3
  PolyF2 w2 = parse_poly("w^2", 8);
  CHECK(bockstein(1, w2).torsion_part() == parse_poly("w^3", 8));
  CHECK(bockstein(0, w2).is_zero());
  // twist(c1) = 1
  PolyF2 c1 = parse_poly("c1", 8);
  CHECK(bockstein(1, c1).is_zero());
  CHECK(bockstein(0, c1).torsion_part() == parse_poly("w c1", 8));
  // additive, monomial-wise
  PolyF2 p = parse_poly("w^2 + c1 + w c2", 8);  // twists 0, 1, 1
  CHECK(bockstein(0, p).torsion_part() == parse_poly("w c1 + w^2 c2", 8));
  CHECK(bockstein(1, p).torsion_part() == parse_poly("w^3", 8));
}

TEST_CASE("degree bound mismatch surfaces as an error") {
  PolyZTwisted a(4), b(6);
  CHECK_THROWS_AS(a + b, DegreeMismatch);
}

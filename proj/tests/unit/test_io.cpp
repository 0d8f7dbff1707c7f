#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "pforge/catalog.hpp"
#include "pforge/io.hpp"

using namespace pforge;

namespace {
const std::vector<std::string> XY = {"x", "y"};
}

TEST_CASE("parse examples") {
  Poly x = Poly::generator(2, 0), y = Poly::generator(2, 1);
  CHECK(parse_poly("x^2 + 1", XY) == x * x + Poly::one(2));
  CHECK(parse_poly("2*x*y + 3", XY) == FieldElem(2) * (x * y) + FieldElem(3) * Poly::one(2));

  Poly p = parse_poly("sqrt(2)*x - 1/3", XY);
  CHECK(p.tower()->height() == 1);
  CHECK(p.coefficient(Monomial::var(2, 0)) == sqrt_or_adjoin(FieldElem(2)));
  CHECK(p.constant_coefficient() == FieldElem(Rational(-1, 3)));

  CHECK(parse_poly("-x + (x + y)^2", XY) ==
        -x + (x + y) * (x + y));
  CHECK(parse_poly("sqrt(4)*x", XY) == FieldElem(2) * x);
  CHECK(parse_poly("0", XY).is_zero());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_poly("x +", XY), domain_error);
  CHECK_THROWS_AS(parse_poly("q + 1", XY), domain_error);
  CHECK_THROWS_AS(parse_poly("x / y", XY), domain_error);
  CHECK_THROWS_AS(parse_poly("sqrt(x)", XY), domain_error);
  CHECK_THROWS_AS(parse_poly("(x + 1", XY), domain_error);
  try {
    parse_poly("x + q", XY);
    FAIL("expected UnknownGenerator");
  } catch (const domain_error& e) {
    CHECK(e.kind() == errc::unknown_generator);
    CHECK(std::string(e.what()).find("position 4") != std::string::npos);
  }
}

TEST_CASE("print-parse identity") {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> coef(-5, 5);
  FieldElem s2 = sqrt_or_adjoin(FieldElem(2));
  for (int it = 0; it < 40; ++it) {
    Poly f = Poly::zero(2);
    for (const auto& m : monomials_up_to_degree(2, 3)) {
      if (coef(rng) > 2) continue;
      FieldElem c = FieldElem(long(coef(rng)));
      if (coef(rng) == 0) c = c + FieldElem(long(coef(rng))) * s2;
      f.add_term(m, c);
    }
    std::string s = poly_string(f, XY);
    Poly back = parse_poly(s, XY);
    CHECK(back == f);
    CHECK(poly_string(back, XY) == s);
  }
}

TEST_CASE("structure serialization round trips bit-exactly") {
  for (const PoissonStructure& P :
       {weyl(2), bianchi(BianchiFamily::sl2), bianchi(BianchiFamily::family5, FieldElem(3))}) {
    Json j = structure_to_json(P);
    PoissonStructure back = structure_from_json(j);
    CHECK(back == P);
    CHECK(back.jacobi_status() == P.jacobi_status());
    CHECK(structure_to_json(back).dump(2) == j.dump(2));
  }

  // a failed-flag structure keeps its witness through the round trip
  Poly Yv = Poly::generator(3, 1), Zv = Poly::generator(3, 2);
  PoissonStructure bad = verify_jacobi(PoissonStructure({"x", "y", "z"}, {Zv, -Yv, Yv}));
  Json j = structure_to_json(bad);
  CHECK(j.contains("jacobi_witness"));
  PoissonStructure back = structure_from_json(j);
  CHECK(back.jacobi_status() == JacobiStatus::failed);
  CHECK(structure_to_json(back).dump() == j.dump());
}

TEST_CASE("derivation serialization") {
  PoissonStructure W = weyl(1);
  auto basis = solve_poisson_derivations(W, 1);
  for (const auto& d : basis) {
    Json j = derivation_to_json(d, W.names());
    PolyDerivation back = derivation_from_json(j, W.names());
    CHECK(back == d);
    CHECK(back.flags().poisson == d.flags().poisson);
    CHECK(derivation_to_json(back, W.names()).dump() == j.dump());
  }
}

TEST_CASE("certificate serialization is deterministic") {
  Poly f = parse_poly("x^2 + 3*x + 2*y + 5", XY);
  ClassificationCertificate c = classify_2var(f);
  Json j1 = certificate_to_json(c, XY);
  Json j2 = certificate_to_json(classify_2var(f), XY);
  CHECK(j1.dump(2) == j2.dump(2));
  CHECK(j1["label"] == "C3");
  CHECK(j1["adjoined_radicands"].size() == c.tower->height());
}

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "pforge/field.hpp"
#include "pforge/io.hpp"

using namespace pforge;

namespace {

FieldElem random_elem(const TowerPtr& t, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  std::vector<Rational> coords(t->dim());
  for (auto& c : coords) c = Rational(num(rng), den(rng));
  return FieldElem(t, coords);
}

}  // namespace

TEST_CASE("rational arithmetic") {
  FieldElem a(Rational(1, 2)), b(Rational(1, 3));
  CHECK(a + b == FieldElem(Rational(5, 6)));
  CHECK((a - a).is_zero());
  CHECK((a / b) == FieldElem(Rational(3, 2)));
  CHECK_THROWS_AS(a / FieldElem::zero(), domain_error);
}

TEST_CASE("defining relation of adjoined roots") {
  FieldElem two(2);
  FieldElem s2 = sqrt_or_adjoin(two);
  CHECK(s2 * s2 == two);
  CHECK(s2.tower()->height() == 1);

  // (1 + sqrt2)(1 - sqrt2) = -1: the independent big-rational expansion is
  // 1*1 - sqrt2*sqrt2 = 1 - 2.
  FieldElem one = FieldElem::one();
  CHECK((one + s2) * (one - s2) == FieldElem(-1));
}

TEST_CASE("sqrt_or_adjoin") {
  // perfect square: tower unchanged
  FieldElem r = sqrt_or_adjoin(FieldElem(4));
  CHECK(r == FieldElem(2));
  CHECK(r.tower()->height() == 0);

  // 2 over the rationals: adjoin, verify by replay
  FieldElem s2 = sqrt_or_adjoin(FieldElem(2));
  CHECK(s2.tower()->height() == 1);
  CHECK(s2 * s2 == FieldElem(2));

  // sqrt of zero is zero without adjunction
  CHECK(sqrt_or_adjoin(FieldElem::zero()).is_zero());
  CHECK(sqrt_or_adjoin(FieldElem::zero()).tower()->height() == 0);

  // -1: the imaginary unit
  FieldElem i = sqrt_or_adjoin(FieldElem(-1));
  CHECK(i * i == FieldElem(-1));
  CHECK(to_string(i) == "sqrt(-1)");
}

TEST_CASE("idempotent adjunction") {
  FieldElem s2 = sqrt_or_adjoin(FieldElem(2));
  FieldElem again = sqrt_or_adjoin(FieldElem(2).embedded(s2.tower()));
  CHECK(*again.tower() == *s2.tower());
  CHECK(again == s2);
}

TEST_CASE("roots found inside towers get sign-normalized") {
  FieldElem s2 = sqrt_or_adjoin(FieldElem(2));
  FieldElem one = FieldElem::one().embedded(s2.tower());
  // 3 + 2*sqrt2 = (1 + sqrt2)^2
  FieldElem sq = (one + s2) * (one + s2);
  auto root = try_sqrt(sq);
  REQUIRE(root.has_value());
  CHECK(*root * *root == sq);
  CHECK(*root == one + s2);
  // 3 - 2*sqrt2 = (1 - sqrt2)^2; the normalized root has sqrt2-coordinate > 0
  FieldElem sq2 = (one - s2) * (one - s2);
  auto root2 = try_sqrt(sq2);
  REQUIRE(root2.has_value());
  CHECK(*root2 == s2 - one);
}

TEST_CASE("canonical_compare examples") {
  CHECK(canonical_compare(FieldElem(Rational(1, 2)), FieldElem(Rational(1, 2))) == Ordering::EQ);
  CHECK(canonical_compare(FieldElem(0), FieldElem(1)) == Ordering::LT);
  // coordinate vectors (0,1) vs (3/2,0): encoding order, not magnitude
  FieldElem s2 = sqrt_or_adjoin(FieldElem(2));
  CHECK(canonical_compare(s2, FieldElem(Rational(3, 2))) == Ordering::GT);
}

TEST_CASE("tower merging and incompatibility") {
  FieldElem s2 = sqrt_or_adjoin(FieldElem(2));
  FieldElem s3 = sqrt_or_adjoin(FieldElem(3));
  CHECK_THROWS_AS(s2 + s3, domain_error);
  // prefix towers merge
  FieldElem s3b = sqrt_or_adjoin(FieldElem(3).embedded(s2.tower()));
  CHECK(s3b.tower()->height() == 2);
  FieldElem sum = s2 + s3b;
  CHECK(sum * sum == FieldElem(5) + FieldElem(2) * (s2 * s3b));
}

TEST_CASE("field axioms on random samples") {
  std::mt19937_64 rng(42);
  TowerPtr t = sqrt_or_adjoin(FieldElem(3).embedded(sqrt_or_adjoin(FieldElem(2)).tower())).tower();
  for (int it = 0; it < 40; ++it) {
    FieldElem a = random_elem(t, rng), b = random_elem(t, rng), c = random_elem(t, rng);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    if (!a.is_zero()) CHECK((a * a.inverse()).is_one());
  }
}

TEST_CASE("sqrt_or_adjoin square property on random inputs") {
  std::mt19937_64 rng(7);
  TowerPtr t = sqrt_or_adjoin(FieldElem(2)).tower();
  for (int it = 0; it < 20; ++it) {
    FieldElem a = random_elem(t, rng);
    if (a.is_zero()) continue;
    FieldElem r = sqrt_or_adjoin(a);
    CHECK(r * r == a.embedded(r.tower()));
  }
}

TEST_CASE("canonical_compare is a total order") {
  std::mt19937_64 rng(99);
  TowerPtr t = sqrt_or_adjoin(FieldElem(5)).tower();
  for (int it = 0; it < 50; ++it) {
    FieldElem a = random_elem(t, rng), b = random_elem(t, rng), c = random_elem(t, rng);
    // antisymmetry
    Ordering ab = canonical_compare(a, b), ba = canonical_compare(b, a);
    CHECK(int(ab) == -int(ba));
    // EQ coincides with equality
    CHECK((ab == Ordering::EQ) == (a == b));
    // transitivity
    if (ab != Ordering::GT && canonical_compare(b, c) != Ordering::GT)
      CHECK(canonical_compare(a, c) != Ordering::GT);
  }
}

TEST_CASE("serialization round trips") {
  std::mt19937_64 rng(5);
  FieldElem s2 = sqrt_or_adjoin(FieldElem(2));
  TowerPtr t2 = sqrt_or_adjoin((FieldElem::one() + s2)).tower();  // nested radicand
  for (int it = 0; it < 20; ++it) {
    FieldElem a = random_elem(t2, rng);
    FieldElem back = parse_field(to_string(a));
    CHECK(back == a);
    CHECK(to_string(back) == to_string(a));
  }
}

TEST_CASE("adjoining a square is rejected") {
  CHECK_THROWS_AS(adjoin(QuadTower::rationals(), FieldElem(4)), domain_error);
  CHECK_THROWS_AS(adjoin(QuadTower::rationals(), FieldElem::zero()), domain_error);
}

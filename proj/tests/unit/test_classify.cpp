#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "pforge/classify.hpp"

using namespace pforge;

namespace {

Poly X2 = Poly::generator(2, 0);
Poly Y2 = Poly::generator(2, 1);

Substitution random_affine2(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  while (true) {
    Mat m = {{FieldElem(long(coef(rng))), FieldElem(long(coef(rng)))},
             {FieldElem(long(coef(rng))), FieldElem(long(coef(rng)))}};
    if (det(m).is_zero()) continue;
    Vec shift = {FieldElem(long(coef(rng))), FieldElem(long(coef(rng)))};
    return Substitution::affine(m, shift);
  }
}

Substitution random_graded3(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> nz(1, 3);
  while (true) {
    Mat m = {{FieldElem(long(coef(rng))), FieldElem(long(coef(rng)))},
             {FieldElem(long(coef(rng))), FieldElem(long(coef(rng)))}};
    if ((m[0][0] * m[1][1] - m[0][1] * m[1][0]).is_zero()) continue;
    Vec tc = {FieldElem(long(coef(rng))), FieldElem(long(coef(rng)))};
    return Substitution::graded3(m, tc, FieldElem(long(nz(rng))));
  }
}

Poly conjugate(const Poly& f, const Substitution& s) {
  std::size_t n = f.nvars();
  PoissonStructure P = n == 2 ? bivector_structure_2(f) : bivector_structure_3(f);
  return transport_structure(P, s).table()[0];
}

std::vector<std::pair<NormalFormLabel, Poly>> two_var_forms() {
  FieldElem lm3 = -FieldElem(3), lm2 = -FieldElem(2), lhalf = -FieldElem(Rational(1, 2));
  std::vector<NormalFormLabel> labels = {
      {Family::C1, {}},   {Family::C2, {}},   {Family::C3, {}},
      {Family::C4a, {}},  {Family::C4b, {}},  {Family::C5a, lm3},
      {Family::C5b, lm2}, {Family::C5a, lhalf},
  };
  std::vector<std::pair<NormalFormLabel, Poly>> out;
  for (const auto& l : labels) out.emplace_back(l, normal_form_poly(l, 2));
  return out;
}

std::vector<std::pair<NormalFormLabel, Poly>> three_var_forms() {
  FieldElem lm3 = -FieldElem(3), lm2 = -FieldElem(2), lhalf = -FieldElem(Rational(1, 2));
  std::vector<NormalFormLabel> labels = {
      {Family::C1, {}},  {Family::C2, {}},   {Family::C3, {}},
      {Family::C4a, {}}, {Family::C4b, {}},  {Family::C4c, {}},
      {Family::C5a, lm3}, {Family::C5b, lm2}, {Family::C5b, lhalf},
  };
  std::vector<std::pair<NormalFormLabel, Poly>> out;
  for (const auto& l : labels) out.emplace_back(l, normal_form_poly(l, 3));
  return out;
}

}  // namespace

TEST_CASE("normalize_f2") {
  auto z = normalize_f2(Poly::zero(2));
  CHECK(z.form == QuadraticForm::zero);
  CHECK(z.subst.is_identity());

  // (x + y)^2: rank one
  Poly sq = (X2 + Y2) * (X2 + Y2);
  auto s = normalize_f2(sq);
  CHECK(s.form == QuadraticForm::square);
  CHECK(conjugate(sq, s.subst) == X2 * X2);

  // x^2 - y^2 = (x+y)(x-y): rank two; lambda fixed by the determinant twist,
  // validated by transport
  Poly pr = X2 * X2 - Y2 * Y2;
  auto p = normalize_f2(pr);
  CHECK(p.form == QuadraticForm::product);
  REQUIRE(p.lambda.has_value());
  CHECK(conjugate(pr, p.subst) == Poly::constant(2, *p.lambda) * (X2 * Y2));
  CHECK(canonical_compare(*p.lambda, -*p.lambda) != Ordering::GT);

  CHECK_THROWS_AS(normalize_f2(X2), domain_error);
}

TEST_CASE("classify_2var case table") {
  auto expect = [](const Poly& f, Family fam) {
    ClassificationCertificate c = classify_2var(f);
    CHECK(c.label.family == fam);
    CHECK(replay(f, c));
    return c;
  };
  auto c1 = expect(Poly::zero(2), Family::C1);
  CHECK(c1.subst.is_identity());
  expect(FieldElem(5) * Poly::one(2), Family::C2);
  expect(X2, Family::C3);
  expect(X2 * X2 + Y2, Family::C3);  // the composed polynomial substitution path
  expect(X2 * X2, Family::C4a);
  expect(X2 * X2 + Poly::one(2), Family::C4b);
  auto c5b = expect(FieldElem(2) * (X2 * Y2) + FieldElem(3) * Poly::one(2), Family::C5b);
  REQUIRE(c5b.label.lambda.has_value());
  CHECK(*c5b.label.lambda == -FieldElem(2));  // canonical sign

  CHECK_THROWS_AS(classify_2var(X2.pow(3)), domain_error);
}

TEST_CASE("classify_3var_graded case table") {
  Poly X = Poly::generator(3, 0), Y = Poly::generator(3, 1), T = Poly::generator(3, 2);
  auto expect = [](const Poly& f, Family fam) {
    ClassificationCertificate c = classify_3var_graded(f);
    CHECK(c.label.family == fam);
    CHECK(replay(f, c));
    return c;
  };
  expect(Poly::zero(3), Family::C1);
  expect(T * T, Family::C2);
  expect(X * T, Family::C3);
  expect(Y * T, Family::C3);  // reaches C3 after the x-y swap
  expect(X * X, Family::C4a);
  expect(X * X + T * T, Family::C4b);
  expect(X * X + Y * T, Family::C4c);
  expect(FieldElem(3) * (X * Y), Family::C5a);
  expect(FieldElem(5) * (X * Y) + T * T, Family::C5b);

  CHECK_THROWS_AS(classify_3var_graded(X + T), domain_error);       // not degree 2
  CHECK_THROWS_AS(classify_3var_graded(X * X + X), domain_error);   // inhomogeneous
  NormalFormLabel c4c{Family::C4c, {}};
  CHECK_THROWS_AS(normal_form_poly(c4c, 2), domain_error);  // C4c is 3-var only
}

TEST_CASE("idempotence on normal forms") {
  for (const auto& [label, f] : two_var_forms()) {
    ClassificationCertificate c = classify_2var(f);
    CHECK(c.label.family == label.family);
    if (label.lambda) CHECK(*c.label.lambda == *label.lambda);
    CHECK(conjugate(f, c.subst) == f);  // the substitution transports f to itself
  }
  for (const auto& [label, f] : three_var_forms()) {
    ClassificationCertificate c = classify_3var_graded(f);
    CHECK(c.label.family == label.family);
    CHECK(conjugate(f, c.subst) == f);
  }
}

TEST_CASE("stability under random conjugation") {
  std::mt19937_64 rng(71);
  for (const auto& [label, f] : two_var_forms()) {
    for (int it = 0; it < 10; ++it) {
      Poly g = conjugate(f, random_affine2(rng));
      ClassificationCertificate c = classify_2var(g);
      CHECK(c.label.family == label.family);
      if (label.lambda) CHECK(*c.label.lambda == *label.lambda);
      CHECK(replay(g, c));
    }
  }
  for (const auto& [label, f] : three_var_forms()) {
    for (int it = 0; it < 10; ++it) {
      Poly g = conjugate(f, random_graded3(rng));
      ClassificationCertificate c = classify_3var_graded(g);
      CHECK(c.label.family == label.family);
      if (label.lambda) CHECK(*c.label.lambda == *label.lambda);
      CHECK(replay(g, c));
    }
  }
}

TEST_CASE("certificate replay on random filtered quadratics") {
  std::mt19937_64 rng(73);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int it = 0; it < 200; ++it) {
    Poly f = Poly::zero(2);
    for (const auto& m : monomials_up_to_degree(2, 2))
      f.add_term(m, FieldElem(long(coef(rng))));
    ClassificationCertificate c = classify_2var(f);
    CHECK(replay(f, c));
  }
  for (int it = 0; it < 200; ++it) {
    Poly f = Poly::zero(3);
    std::vector<Monomial> degree2;
    monomials_of_degree(3, 2, degree2);
    for (const auto& m : degree2) f.add_term(m, FieldElem(long(coef(rng))));
    ClassificationCertificate c = classify_3var_graded(f);
    CHECK(replay(f, c));
  }
}

TEST_CASE("fingerprints separate the case table") {
  // two variables, lambda fixed
  std::vector<Poly> forms2;
  for (const auto& [label, f] : two_var_forms())
    if (!label.lambda || *label.lambda == -FieldElem(3) ||
        (label.family == Family::C5b && *label.lambda == -FieldElem(2)))
      forms2.push_back(f);
  std::vector<InvariantFingerprint> fps;
  for (const auto& f : forms2) fps.push_back(fingerprint(bivector_structure_2(f)));
  for (std::size_t i = 0; i < fps.size(); ++i)
    for (std::size_t j = i + 1; j < fps.size(); ++j) CHECK(!(fps[i] == fps[j]));

  // three variables
  std::vector<Poly> forms3;
  for (const auto& [label, f] : three_var_forms())
    if (!label.lambda || *label.lambda == -FieldElem(3) ||
        (label.family == Family::C5b && *label.lambda == -FieldElem(2)))
      forms3.push_back(f);
  std::vector<InvariantFingerprint> fps3;
  for (const auto& f : forms3) fps3.push_back(fingerprint(bivector_structure_3(f)));
  for (std::size_t i = 0; i < fps3.size(); ++i)
    for (std::size_t j = i + 1; j < fps3.size(); ++j) CHECK(!(fps3[i] == fps3[j]));
}

TEST_CASE("case-table fingerprint values") {
  // C3: commutator ideal (x), one principal prime (x)
  InvariantFingerprint f3 = fingerprint(bivector_structure_2(X2));
  CHECK(f3.commutator_ideal.gens == std::vector<Poly>{X2});
  CHECK(f3.principal_primes_deg2 == std::vector<Poly>{X2});

  // C4a: commutator ideal (x^2), one principal prime (x)
  InvariantFingerprint f4 = fingerprint(bivector_structure_2(X2 * X2));
  CHECK(f4.commutator_ideal.gens == std::vector<Poly>{X2 * X2});
  CHECK(f4.principal_primes_deg2 == std::vector<Poly>{X2});

  // C5a: principal primes {x, y}
  InvariantFingerprint f5 = fingerprint(bivector_structure_2(FieldElem(3) * (X2 * Y2)));
  CHECK(f5.principal_primes_deg2 == std::vector<Poly>{Y2, X2});
}

TEST_CASE("C4c separation through fibers at t = 1") {
  // The quotient surrogate: A/(t-1) classifies differently for C4a, C4b, C4c.
  Poly X = Poly::generator(3, 0), Y = Poly::generator(3, 1), T = Poly::generator(3, 2);
  auto fiber_label = [&](const Poly& f) {
    PoissonStructure F = fiber_structure(bivector_structure_3(f), 2, FieldElem(1));
    return classify_2var(F.table()[0]).label.family;
  };
  CHECK(fiber_label(X * X) == Family::C4a);
  CHECK(fiber_label(X * X + T * T) == Family::C4b);
  CHECK(fiber_label(X * X + Y * T) == Family::C3);  // x^2 + y collapses to C3
}

TEST_CASE("lambda invariance under re-presentation") {
  std::mt19937_64 rng(79);
  FieldElem lam(7);
  Poly f = Poly::constant(2, lam) * (X2 * Y2);
  for (int it = 0; it < 15; ++it) {
    Poly g = conjugate(f, random_affine2(rng));
    ClassificationCertificate c = classify_2var(g);
    REQUIRE(c.label.lambda.has_value());
    CHECK(*c.label.lambda == -lam);  // canonical representative of {7, -7}
  }
}

TEST_CASE("isomorphic_quadratic") {
  // 3xy vs -3xy: yes, by switching the variables
  Poly f = FieldElem(3) * (X2 * Y2), g = FieldElem(-3) * (X2 * Y2);
  IsoResult r = isomorphic_quadratic(f, g, 2);
  CHECK(r.isomorphic);
  REQUIRE(r.witness.has_value());
  CHECK(conjugate(f, *r.witness) == g);

  // C3 vs C4a: separated by the commutator ideal
  IsoResult r2 = isomorphic_quadratic(X2, X2 * X2, 2);
  CHECK(!r2.isomorphic);
  CHECK(r2.separating == "commutator_ideal");

  // same family, different lambda
  IsoResult r3 = isomorphic_quadratic(FieldElem(3) * (X2 * Y2), FieldElem(5) * (X2 * Y2), 2);
  CHECK(!r3.isomorphic);
  CHECK(r3.separating == "lambda");

  // f vs f: identity
  IsoResult r4 = isomorphic_quadratic(X2 * X2 + Poly::one(2), X2 * X2 + Poly::one(2), 2);
  CHECK(r4.isomorphic);

  // 3-var: C4c vs C4a
  Poly X = Poly::generator(3, 0), Y = Poly::generator(3, 1), T = Poly::generator(3, 2);
  IsoResult r5 = isomorphic_quadratic(X * X + Y * T, X * X, 3);
  CHECK(!r5.isomorphic);
}

TEST_CASE("classification cases that adjoin radicands") {
  // x^2 + 2: the rescaling needs sqrt(2)
  Poly f = X2 * X2 + FieldElem(2) * Poly::one(2);
  ClassificationCertificate c = classify_2var(f);
  CHECK(c.label.family == Family::C4b);
  CHECK(c.tower->height() == 1);
  CHECK(replay(f, c));

  // x^2 - 1 also lands on C4b (the degree-2 part is the square x^2); the
  // rescaling adjoins sqrt(-1)
  Poly g = X2 * X2 - Poly::one(2);
  ClassificationCertificate cg = classify_2var(g);
  CHECK(cg.label.family == Family::C4b);
  CHECK(replay(g, cg));

  // x^2 + xy - y^2: rank two with discriminant 5, lambda = -sqrt(5) in canon
  Poly h = X2 * X2 + X2 * Y2 - Y2 * Y2;
  ClassificationCertificate ch = classify_2var(h);
  CHECK(ch.label.family == Family::C5a);
  REQUIRE(ch.label.lambda.has_value());
  CHECK(*ch.label.lambda == -sqrt_or_adjoin(FieldElem(5)));
  CHECK(replay(h, ch));

  // the same quadratic homogenized, shifted by t^2: C5b over the same tower
  Poly X = Poly::generator(3, 0), Y = Poly::generator(3, 1), T = Poly::generator(3, 2);
  Poly k = X * X + X * Y - Y * Y + T * T;
  ClassificationCertificate ck = classify_3var_graded(k);
  CHECK(ck.label.family == Family::C5b);
  CHECK(*ck.label.lambda == -sqrt_or_adjoin(FieldElem(5)));
  CHECK(replay(k, ck));
}

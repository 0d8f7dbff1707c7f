#include <catch2/catch_amalgamated.hpp>

#include "pforge/catalog.hpp"
#include "pforge/ore.hpp"

using namespace pforge;

namespace {

PolyDerivation kronecker(std::size_t nvars, std::size_t hit) {
  std::vector<Poly> imgs(nvars, Poly::zero(nvars));
  imgs[hit] = Poly::one(nvars);
  return PolyDerivation(imgs);
}

}  // namespace

TEST_CASE("extend") {
  // trivial k[x] extended by alpha = 0, delta(x) = 1 is the first Weyl structure
  PoissonStructure kx({"x"}, {});
  PoissonStructure W = extend(kx, PolyDerivation::zero(1), kronecker(1, 0), "y");
  CHECK(W.nvars() == 2);
  CHECK(W.table()[0] == Poly::one(2));
  CHECK(W.jacobi_status() == JacobiStatus::verified);

  // alpha = delta = 0: table padded with zeros
  PoissonStructure H = bianchi(BianchiFamily::heisenberg);
  PoissonStructure Hz = extend(H, PolyDerivation::zero(3), PolyDerivation::zero(3), "w");
  CHECK(Hz.nvars() == 4);
  for (std::size_t i = 0; i < 3; ++i) CHECK(Hz.generator_bracket(i, 3).is_zero());
  CHECK(Hz.entry(0, 1) == Poly::generator(4, 2));

  // family4: {e,g} = delta(e) = -e under the stored orientation
  FieldElem alpha(5);
  PoissonStructure EF({"e", "f"}, {Poly::zero(2)});
  PolyDerivation delta(
      {-Poly::generator(2, 0), Poly::constant(2, -alpha) * Poly::generator(2, 1)});
  PoissonStructure B = extend(EF, PolyDerivation::zero(2), delta, "g");
  CHECK(B.generator_bracket(0, 2) == -Poly::generator(3, 0));
  CHECK(B == bianchi(BianchiFamily::family4, alpha).with_jacobi(JacobiStatus::verified, {}));

  // uncertifiable steps are rejected
  PolyDerivation euler({Poly::generator(2, 0), Poly::generator(2, 1)});
  CHECK_THROWS_AS(extend(weyl(1), euler, PolyDerivation::zero(2), "t"), domain_error);
  CHECK_THROWS_AS(extend(weyl(1), PolyDerivation::zero(2), euler, "t"), domain_error);
}

TEST_CASE("build_tower and flatten") {
  // Weyl P_n as k[x1..xn] plus n delta-steps
  for (unsigned n : {1u, 2u, 3u}) {
    std::vector<Poly> zt(n * (n - 1) / 2, Poly::zero(n));
    std::vector<std::string> names;
    for (unsigned i = 1; i <= n; ++i) names.push_back(n == 1 ? "x" : "x" + std::to_string(i));
    PoissonStructure base(names, zt);
    std::vector<OreStep> steps;
    for (unsigned i = 0; i < n; ++i) {
      std::size_t cur = n + i;
      steps.push_back({n == 1 ? "y" : "y" + std::to_string(i + 1),
                       PolyDerivation::zero(cur), kronecker(cur, i)});
    }
    OreTower tower = build_tower(base, steps);
    PoissonStructure flat = flatten(tower);
    PoissonStructure expect = weyl(n);
    CHECK(flat == expect);
    for (const auto& s : tower.steps) {
      CHECK(s.alpha.flags().poisson);
      CHECK(s.delta.flags().alpha_compatible);
    }
  }

  // skew-symmetric as alpha-steps: k[x1][x2; a2]...[xn; an]
  Mat lam = {{FieldElem(0), FieldElem(2), FieldElem(-1)},
             {FieldElem(-2), FieldElem(0), FieldElem(4)},
             {FieldElem(1), FieldElem(-4), FieldElem(0)}};
  PoissonStructure base1({"x1"}, {});
  std::vector<OreStep> steps;
  for (std::size_t j = 1; j < 3; ++j) {
    std::vector<Poly> imgs;
    for (std::size_t i = 0; i < j; ++i)
      imgs.push_back(Poly::term(j, Monomial::var(j, i), lam[i][j]));
    steps.push_back({"x" + std::to_string(j + 1), PolyDerivation(imgs), PolyDerivation::zero(j)});
  }
  CHECK(flatten(build_tower(base1, steps)) == skew_symmetric(lam).with_jacobi(JacobiStatus::unchecked, {}));

  // empty steps: base unchanged
  CHECK(flatten(build_tower(base1, {})) == base1);

  // flatten is associative with extend
  OreTower partial{base1, {steps[0]}};
  CHECK(flatten(OreTower{base1, steps}) ==
        extend(flatten(partial), steps[1].alpha, steps[1].delta, steps[1].label));
}

TEST_CASE("recognize") {
  // Weyl P1 at t = y: alpha = 0, delta = Kronecker
  auto r = recognize(weyl(1), 1);
  REQUIRE(std::holds_alternative<OreForm>(r));
  const auto& ore = std::get<OreForm>(r);
  CHECK(ore.alpha.is_zero());
  CHECK(ore.delta.images()[0] == Poly::one(1));
  CHECK(ore.alpha.flags().poisson);
  CHECK(ore.delta.flags().alpha_compatible);

  // skew at t = x_n: alpha(x_j) = lambda_jn x_j, delta = 0
  Mat lam = {{FieldElem(0), FieldElem(2), FieldElem(-1)},
             {FieldElem(-2), FieldElem(0), FieldElem(4)},
             {FieldElem(1), FieldElem(-4), FieldElem(0)}};
  auto rs = recognize(skew_symmetric(lam), 2);
  REQUIRE(std::holds_alternative<OreForm>(rs));
  const auto& ores = std::get<OreForm>(rs);
  CHECK(ores.delta.is_zero());
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(ores.alpha.images()[j] == Poly::term(2, Monomial::var(2, j), lam[j][2]));

  // {x, t} = t^2: degree in t exceeds 1
  Poly t2 = Poly::generator(2, 1) * Poly::generator(2, 1);
  PoissonStructure NO({"x", "t"}, {t2});
  auto rn = recognize(NO, 1);
  REQUIRE(std::holds_alternative<NotOre>(rn));
  CHECK(std::get<NotOre>(rn).witness == std::pair<std::size_t, std::size_t>{0, 1});

  // {x,y} = xt: k[x,y] is not bracket-closed, so not Ore at t...
  Poly xt = Poly::generator(3, 0) * Poly::generator(3, 2);
  PoissonStructure NO2({"x", "y", "t"}, {xt, Poly::zero(3), Poly::zero(3)});
  auto rn2 = recognize(NO2, 2);
  REQUIRE(std::holds_alternative<NotOre>(rn2));
  CHECK(std::get<NotOre>(rn2).witness == std::pair<std::size_t, std::size_t>{0, 1});
  // ...but it is Ore at y: {x, y} = 0*y + xt over the base k[x,t]
  auto rn3 = recognize(NO2, 1);
  REQUIRE(std::holds_alternative<OreForm>(rn3));
  const auto& ore3 = std::get<OreForm>(rn3);
  CHECK(ore3.alpha.is_zero());
  CHECK(ore3.delta.images()[0] == Poly::generator(2, 0) * Poly::generator(2, 1));
  CHECK(ore3.delta.images()[1].is_zero());
}

TEST_CASE("round trip: recognize after flatten recovers the last step") {
  PoissonStructure base({"x1", "x2"}, {Poly::zero(2)});
  std::vector<OreStep> steps = {
      {"y1", PolyDerivation::zero(2), kronecker(2, 0)},
      {"y2", PolyDerivation::zero(3), kronecker(3, 1)},
  };
  PoissonStructure flat = flatten(build_tower(base, steps));
  auto r = recognize(flat, 3);
  REQUIRE(std::holds_alternative<OreForm>(r));
  const auto& ore = std::get<OreForm>(r);
  CHECK(ore.alpha.images() == PolyDerivation::zero(3).images());
  CHECK(ore.delta.images() == kronecker(3, 1).images());
  CHECK(ore.base == flatten(build_tower(base, {steps[0]})));
}

TEST_CASE("extend never needs post-hoc Jacobi repair") {
  // For solver-certified alphas (and delta = 0), the extension verifies.
  for (const PoissonStructure& P :
       {weyl(1), bianchi(BianchiFamily::heisenberg), bianchi(BianchiFamily::sl2)}) {
    auto ders = solve_poisson_derivations(P, 1);
    std::size_t tried = 0;
    for (const auto& a : ders) {
      if (tried++ == 3) break;
      PoissonStructure E = extend(P, a, PolyDerivation::zero(P.nvars()), "t");
      CHECK(E.jacobi_status() == JacobiStatus::verified);
    }
  }
}

// Build the second Weyl Poisson structure as an iterated Poisson-Ore
// extension and recognize the last step back.

#include <iostream>

#include "pforge/pforge.hpp"

using namespace pforge;

int main() {
  // Base: k[x1, x2] with the zero bracket.
  PoissonStructure base({"x1", "x2"}, {Poly::zero(2)});

  auto kronecker = [](std::size_t nvars, std::size_t hit) {
    std::vector<Poly> images(nvars, Poly::zero(nvars));
    images[hit] = Poly::one(nvars);
    return PolyDerivation(images);
  };

  std::vector<OreStep> steps = {
      {"y1", PolyDerivation::zero(2), kronecker(2, 0)},
      {"y2", PolyDerivation::zero(3), kronecker(3, 1)},
  };
  PoissonStructure P2 = flatten(build_tower(base, steps));

  std::cout << structure_to_json(P2).dump(2) << "\n";

  auto rec = recognize(P2, 3);
  if (std::holds_alternative<OreForm>(rec)) {
    const auto& ore = std::get<OreForm>(rec);
    std::cout << "\nrecognized at y2: alpha = 0 everywhere, delta images:";
    for (const auto& img : ore.delta.images())
      std::cout << " " << poly_string(img, ore.base.names()) << ";";
    std::cout << "\n";
  }
  return 0;
}

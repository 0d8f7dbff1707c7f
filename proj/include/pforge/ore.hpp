#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pforge/derivation.hpp"
#include "pforge/poisson.hpp"

namespace pforge {

/// One Poisson-Ore extension step: a new generator t with
/// {a, t} = alpha(a) t + delta(a).  Both derivations act on the ring built so
/// far; certificates are established when the step is applied.
struct OreStep {
  std::string label;
  PolyDerivation alpha;
  PolyDerivation delta;
};

struct OreTower {
  PoissonStructure base;
  std::vector<OreStep> steps;
};

/// A[t; alpha, delta]_P: table entries {x_i, t} = alpha(x_i) t + delta(x_i),
/// stored in that orientation.  The preconditions are exactly the Jacobi
/// conditions for the extended bracket, so the result is Jacobi verified.
inline PoissonStructure extend(const PoissonStructure& P, const PolyDerivation& alpha,
                               const PolyDerivation& delta, const std::string& label) {
  if (!is_poisson_derivation(P, alpha))
    fail(errc::alpha_not_poisson, "alpha is not a Poisson derivation of the base");
  if (!is_poisson_alpha_derivation(P, delta, alpha))
    fail(errc::delta_not_compatible, "delta is not a Poisson alpha-derivation of the base");
  std::size_t n = P.nvars();
  std::vector<std::string> names = P.names();
  names.push_back(label);
  std::vector<Poly> table;
  Poly t = Poly::generator(n + 1, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) table.push_back(P.entry(i, j).lifted(n + 1));
    table.push_back(alpha.images()[i].lifted(n + 1) * t + delta.images()[i].lifted(n + 1));
  }
  PoissonStructure Q = verify_jacobi(PoissonStructure(std::move(names), std::move(table)));
  if (Q.jacobi_status() != JacobiStatus::verified) {
    // Possible only when the base itself fails Jacobi.
    fail(errc::invalid_argument, "base structure does not satisfy the Jacobi identity");
  }
  return Q;
}

/// Certify and record the steps against the growing ring.
inline OreTower build_tower(const PoissonStructure& base, const std::vector<OreStep>& steps) {
  OreTower tower{base, {}};
  PoissonStructure cur = base;
  for (const auto& s : steps) {
    cur = extend(cur, s.alpha, s.delta, s.label);  // throws when uncertifiable
    OreStep certified = s;
    auto af = s.alpha.flags();
    af.poisson = true;
    auto df = s.delta.flags();
    df.alpha_compatible = true;
    certified.alpha = s.alpha.with_flags(af);
    certified.delta = s.delta.with_flags(df);
    tower.steps.push_back(certified);
  }
  return tower;
}

inline PoissonStructure flatten(const OreTower& tower) {
  PoissonStructure cur = tower.base;
  for (const auto& s : tower.steps) cur = extend(cur, s.alpha, s.delta, s.label);
  return cur;
}

/// Successful recognition at a generator: the base structure on the other
/// generators plus the recovered derivations (alpha poisson-flagged, delta
/// alpha-compatible-flagged).
struct OreForm {
  PoissonStructure base;
  PolyDerivation alpha;
  PolyDerivation delta;
};

struct NotOre {
  std::pair<std::size_t, std::size_t> witness;  // offending generator pair
};

using RecognizeResult = std::variant<OreForm, NotOre>;

/// Does {A, t} lie in A t + A for A the subring on the other generators?
/// If every {x_i, t} splits as q_i t + r_i with q_i, r_i free of t (and the
/// remaining table is t-free), return alpha(x_i) = q_i, delta(x_i) = r_i with
/// both derivation conditions certified; otherwise the offending entry.
inline RecognizeResult recognize(const PoissonStructure& P, std::size_t t) {
  std::size_t n = P.nvars();
  if (t >= n) fail(errc::arity_mismatch, "generator index out of range");
  std::vector<std::size_t> keep;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i)
    if (i != t) {
      keep.push_back(i);
      names.push_back(P.names()[i]);
    }
  std::vector<std::size_t> perm(n, n);
  for (std::size_t k = 0; k < keep.size(); ++k) perm[keep[k]] = k;

  // The base subring must be bracket-closed: entries among kept generators
  // free of t.
  std::vector<Poly> base_table;
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = a + 1; b < keep.size(); ++b) {
      const Poly& p = P.entry(keep[a], keep[b]);
      if (p.degree_in(t) > 0) return NotOre{{keep[a], keep[b]}};
      base_table.push_back(p.reindexed(n - 1, perm));
    }
  PoissonStructure base(names, base_table);

  std::vector<Poly> alpha_images, delta_images;
  for (std::size_t k = 0; k < keep.size(); ++k) {
    Poly e = P.generator_bracket(keep[k], t);  // {x_i, t}
    Poly q = Poly::zero(n), r = Poly::zero(n);
    for (const auto& [m, c] : e.terms()) {
      if (m.exp[t] == 0) {
        r.add_term(m, c);
      } else if (m.exp[t] == 1) {
        Monomial mm = m;
        mm.exp[t] = 0;
        q.add_term(mm, c);
      } else {
        return NotOre{{keep[k], t}};  // degree in t exceeds 1
      }
    }
    alpha_images.push_back(q.reindexed(n - 1, perm));
    delta_images.push_back(r.reindexed(n - 1, perm));
  }
  PolyDerivation alpha(alpha_images), delta(delta_images);
  if (!is_poisson_derivation(base, alpha)) return NotOre{{keep[0], t}};
  if (!is_poisson_alpha_derivation(base, delta, alpha)) return NotOre{{keep[0], t}};
  auto af = alpha.flags();
  af.poisson = true;
  auto df = delta.flags();
  df.alpha_compatible = true;
  return OreForm{base, alpha.with_flags(af), delta.with_flags(df)};
}

}  // namespace pforge

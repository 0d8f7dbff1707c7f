#pragma once

#include <algorithm>
#include <deque>
#include <vector>

#include "pforge/poly.hpp"

namespace pforge {

/// Full normal form of f modulo a list of nonzero polynomials: every term is
/// reduced until no leading monomial of the basis divides any remaining term.
inline Poly normal_form(const Poly& f, const std::vector<Poly>& basis) {
  Poly rem = f;
  bool reduced = true;
  while (reduced && !rem.is_zero()) {
    reduced = false;
    for (const auto& [m, c] : rem.terms()) {
      for (const auto& g : basis) {
        if (!g.leading_monomial().divides(m)) continue;
        Monomial q = m / g.leading_monomial();
        FieldElem s = c / g.leading_coefficient();
        rem = rem - Poly::term(rem.nvars(), q, s) * g;
        reduced = true;
        break;
      }
      if (reduced) break;
    }
  }
  return rem;
}

/// Reduced Groebner basis under graded-lex: monic, inter-reduced generators
/// sorted by descending leading monomial.  Plain Buchberger; desk-scale
/// inputs do not justify anything fancier.
struct GroebnerBasis {
  std::size_t nvars = 0;
  std::vector<Poly> gens;  // canonical: reduced GB is unique for (ideal, order)

  bool is_zero_ideal() const { return gens.empty(); }
  bool is_unit_ideal() const { return gens.size() == 1 && gens[0].is_constant() && !gens[0].is_zero(); }
};

inline GroebnerBasis groebner_basis(const std::vector<Poly>& input) {
  GroebnerBasis out;
  std::vector<Poly> basis;
  for (const auto& f : input) {
    if (f.is_zero()) continue;
    if (out.nvars == 0 && !basis.empty() && f.nvars() != basis.front().nvars())
      fail(errc::arity_mismatch, "generators live in different rings");
    basis.push_back(f.monic());
  }
  if (!input.empty()) out.nvars = input.front().nvars();
  if (basis.empty()) return out;
  out.nvars = basis.front().nvars();
  for (const auto& f : basis)
    if (f.nvars() != out.nvars) fail(errc::arity_mismatch, "generators live in different rings");

  std::deque<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.emplace_back(i, j);

  while (!pairs.empty()) {
    // Deterministic pair selection: smallest lcm in grlex, ties by indices.
    std::size_t best = 0;
    Monomial best_lcm = lcm(basis[pairs[0].first].leading_monomial(),
                            basis[pairs[0].second].leading_monomial());
    for (std::size_t k = 1; k < pairs.size(); ++k) {
      Monomial l = lcm(basis[pairs[k].first].leading_monomial(),
                       basis[pairs[k].second].leading_monomial());
      if (grlex_cmp(l, best_lcm) < 0) {
        best = k;
        best_lcm = l;
      }
    }
    auto [i, j] = pairs[best];
    pairs.erase(pairs.begin() + std::ptrdiff_t(best));

    const Monomial &mi = basis[i].leading_monomial(), &mj = basis[j].leading_monomial();
    Monomial l = lcm(mi, mj);
    // Buchberger's coprimality criterion.
    if (l.total_degree() == mi.total_degree() + mj.total_degree()) {
      bool coprime = true;
      for (std::size_t v = 0; v < l.exp.size(); ++v)
        if (mi.exp[v] > 0 && mj.exp[v] > 0) coprime = false;
      if (coprime) continue;
    }
    Poly s = Poly::term(out.nvars, l / mi, FieldElem::one()) * basis[i] -
             Poly::term(out.nvars, l / mj, FieldElem::one()) * basis[j];
    Poly r = normal_form(s, basis);
    if (r.is_zero()) continue;
    basis.push_back(r.monic());
    for (std::size_t k = 0; k + 1 < basis.size(); ++k) pairs.emplace_back(k, basis.size() - 1);
  }

  // Inter-reduce to the unique reduced basis.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      std::vector<Poly> others;
      for (std::size_t j = 0; j < basis.size(); ++j)
        if (j != i) others.push_back(basis[j]);
      Poly r = normal_form(basis[i], others);
      if (r != basis[i]) {
        changed = true;
        if (r.is_zero()) {
          basis.erase(basis.begin() + std::ptrdiff_t(i));
          --i;
        } else {
          basis[i] = r.monic();
        }
      }
    }
  }
  std::sort(basis.begin(), basis.end(), [](const Poly& a, const Poly& b) {
    return grlex_cmp(a.leading_monomial(), b.leading_monomial()) > 0;
  });
  out.gens = std::move(basis);
  return out;
}

inline Poly normal_form(const Poly& f, const GroebnerBasis& gb) {
  return normal_form(f, gb.gens);
}

/// Membership via zero normal form.
inline bool ideal_member(const Poly& f, const GroebnerBasis& gb) {
  return normal_form(f, gb.gens).is_zero();
}

inline bool operator==(const GroebnerBasis& a, const GroebnerBasis& b) {
  return a.nvars == b.nvars && a.gens == b.gens;
}

}  // namespace pforge

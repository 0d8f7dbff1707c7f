#pragma once

#include <algorithm>
#include <memory>
#include <vector>

#include "pforge/factor.hpp"
#include "pforge/poisson.hpp"

namespace pforge {

/// Which elements count as units for associate-class deduplication.  Laurent
/// rings are modeled inside polynomial rings this way: monomial_units marks
/// the generators that are invertible.
struct UnitGroupSpec {
  enum class Kind { constants_only, monomial_units };
  Kind kind = Kind::constants_only;
  std::vector<std::size_t> unit_gens;  // indices, monomial_units only

  static UnitGroupSpec constants() { return {}; }
  static UnitGroupSpec monomial(std::vector<std::size_t> gens) {
    UnitGroupSpec u;
    u.kind = Kind::monomial_units;
    u.unit_gens = std::move(gens);
    std::sort(u.unit_gens.begin(), u.unit_gens.end());
    return u;
  }
  static UnitGroupSpec monomial_all(std::size_t nvars) {
    std::vector<std::size_t> g(nvars);
    for (std::size_t i = 0; i < nvars; ++i) g[i] = i;
    return monomial(g);
  }

  bool is_unit_gen(std::size_t i) const {
    return kind == Kind::monomial_units &&
           std::binary_search(unit_gens.begin(), unit_gens.end(), i);
  }
};

/// All divisors g of f (f = g*b), one representative per associate class
/// under the unit group, enumerated from the bounded factorization.  For
/// monomial units the unit-group generators themselves appear as
/// representatives (they divide everything).
inline std::vector<Poly> subwords(const Poly& f, const UnitGroupSpec& units) {
  if (f.is_zero()) fail(errc::zero_input, "subwords of zero");
  Factorization F = factor_bounded(f);
  if (!F.complete) fail(errc::factorization_unavailable, "divisor enumeration needs a complete factorization");
  // Drop unit-generator factors (they are associates of 1).
  std::vector<std::pair<Poly, unsigned>> parts;
  for (const auto& [g, mult] : F.factors) {
    if (units.kind == UnitGroupSpec::Kind::monomial_units) {
      bool is_unit = false;
      for (std::size_t i : units.unit_gens)
        if (g == Poly::generator(f.nvars(), i)) is_unit = true;
      if (is_unit) continue;
    }
    parts.emplace_back(g, mult);
  }
  std::vector<Poly> out;
  out.push_back(Poly::one(f.nvars()));
  // Subset products with multiplicities.
  std::vector<unsigned> pick(parts.size(), 0);
  while (true) {
    std::size_t i = 0;
    while (i < parts.size() && pick[i] == parts[i].second) {
      pick[i] = 0;
      ++i;
    }
    if (i == parts.size()) break;
    ++pick[i];
    Poly d = Poly::one(f.nvars());
    for (std::size_t k = 0; k < parts.size(); ++k)
      if (pick[k]) d = d * parts[k].first.pow(pick[k]);
    out.push_back(d);
  }
  if (units.kind == UnitGroupSpec::Kind::monomial_units) {
    for (std::size_t i : units.unit_gens) out.push_back(Poly::generator(f.nvars(), i));
  }
  std::sort(out.begin(), out.end(), PolyLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

enum class DivisorStatus { stable, capped };

struct DivisorSubalgebra {
  std::vector<Poly> generators;  // nonconstant generating set found
  DivisorStatus status = DivisorStatus::stable;
};

namespace detail {

/// Incremental echelon span of polynomials truncated at a degree cap,
/// supporting membership tests.  Rows are kept fully reduced.
class TruncatedSpan {
 public:
  TruncatedSpan(std::size_t nvars, unsigned degree_cap)
      : nvars_(nvars), cols_(monomials_up_to_degree(nvars, degree_cap)) {}

  Vec to_vec(const Poly& p) const {
    Vec v(cols_.size(), FieldElem::zero());
    for (const auto& [m, c] : p.terms()) {
      std::size_t idx = cols_.size();
      for (std::size_t i = 0; i < cols_.size(); ++i)
        if (cols_[i] == m) {
          idx = i;
          break;
        }
      if (idx == cols_.size()) fail(errc::degree_cap_exceeded, "element above the span cap");
      v[idx] = c;
    }
    return v;
  }

  Poly to_poly(const Vec& v) const {
    Poly p = Poly::zero(nvars_);
    for (std::size_t i = 0; i < cols_.size(); ++i) p.add_term(cols_[i], v[i]);
    return p;
  }

  /// Reduce against current rows; nonzero remainder means not in the span.
  Vec reduce(Vec v) const {
    for (const auto& [piv, row] : rows_) {
      if (v[piv].is_zero()) continue;
      FieldElem c = v[piv];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - c * row[j];
    }
    return v;
  }

  bool contains(const Poly& p) const {
    Vec r = reduce(to_vec(p));
    for (const auto& c : r)
      if (!c.is_zero()) return false;
    return true;
  }

  /// Insert if independent; returns true when the span grew.
  bool insert(const Poly& p) {
    Vec r = reduce(to_vec(p));
    std::size_t piv = r.size();
    for (std::size_t j = 0; j < r.size(); ++j)
      if (!r[j].is_zero()) {
        piv = j;
        break;
      }
    if (piv == r.size()) return false;
    FieldElem inv = r[piv].inverse();
    for (auto& c : r) c = inv * c;
    for (auto& [q, row] : rows_) {
      if (row[piv].is_zero()) continue;
      FieldElem c = row[piv];
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = row[j] - c * r[j];
    }
    rows_.emplace_back(piv, std::move(r));
    std::sort(rows_.begin(), rows_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return true;
  }

  std::vector<Poly> representatives() const {
    std::vector<Poly> reps;
    for (const auto& [piv, row] : rows_) reps.push_back(to_poly(row));
    std::sort(reps.begin(), reps.end(), PolyLess{});
    return reps;
  }

  std::size_t dim() const { return rows_.size(); }

 private:
  std::size_t nvars_;
  std::vector<Monomial> cols_;
  std::vector<std::pair<std::size_t, Vec>> rows_;  // pivot column, reduced row
};

/// Close a generating set under products and brackets within the degree cap.
inline void close_subalgebra(const PoissonStructure& P, TruncatedSpan& span,
                             const std::vector<Poly>& gens, unsigned degree_cap) {
  span.insert(Poly::one(P.nvars()));
  std::vector<Poly> members;
  auto push = [&](const Poly& p) {
    if (p.is_zero() || p.total_degree() > int(degree_cap)) return;
    if (span.insert(p)) members.push_back(p);
  };
  for (const auto& g : gens) push(g);
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Poly prod = members[i] * members[j];
      if (prod.total_degree() <= int(degree_cap)) push(prod);
      Poly br = bracket(P, members[i], members[j]);
      if (!br.is_zero() && br.total_degree() <= int(degree_cap)) push(br);
    }
  }
}

}  // namespace detail

/// The F-divisor Poisson subalgebra at desk scale: iterate
/// D_n = (Poisson subalgebra generated by subwords of D_{n-1}) inside the
/// degree-capped truncation until stable or capped.  Capped results are lower
/// approximations of the generating set.
inline DivisorSubalgebra divisor_subalgebra(const PoissonStructure& P,
                                            const std::vector<Poly>& F,
                                            const UnitGroupSpec& units,
                                            unsigned iteration_cap = 8,
                                            unsigned degree_cap = 8) {
  if (F.empty()) fail(errc::invalid_argument, "F must be nonempty");
  for (const auto& f : F)
    if (f.is_zero()) fail(errc::zero_input, "F must not contain zero");
  std::size_t n = P.nvars();
  auto normalize = [&](Poly p) {
    if (units.kind == UnitGroupSpec::Kind::monomial_units) {
      for (std::size_t i : units.unit_gens) {
        unsigned mn = ~0u;
        for (const auto& [m, c] : p.terms()) mn = std::min(mn, m.exp[i]);
        if (mn && mn != ~0u) {
          Monomial mono = Monomial::one(n);
          mono.exp[i] = mn;
          p = *divide_exact(p, Poly::term(n, mono, FieldElem::one()));
        }
      }
    }
    return p.is_zero() ? p : p.monic();
  };

  DivisorSubalgebra out;
  out.status = DivisorStatus::capped;
  std::vector<Poly> gens;
  for (const auto& f : F) {
    Poly g = normalize(f);
    if (!g.is_constant()) gens.push_back(g);
  }
  detail::TruncatedSpan span(n, degree_cap);
  {
    std::vector<Poly> init = gens;
    init.push_back(Poly::one(n));
    detail::close_subalgebra(P, span, init, degree_cap);
  }
  for (unsigned it = 0; it < iteration_cap; ++it) {
    std::vector<Poly> fresh;
    for (const Poly& rep : span.representatives()) {
      if (rep.is_zero()) continue;
      // subwords() output is already associate-normalized (and deliberately
      // includes the unit-group generators as representatives).
      for (const Poly& w : subwords(rep, units)) {
        if (w.is_constant()) continue;
        if (!span.contains(w)) fresh.push_back(w);
      }
    }
    std::sort(fresh.begin(), fresh.end(), PolyLess{});
    fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
    if (fresh.empty()) {
      out.status = DivisorStatus::stable;
      break;
    }
    for (const auto& g : fresh) gens.push_back(g);
    detail::close_subalgebra(P, span, fresh, degree_cap);
  }
  std::sort(gens.begin(), gens.end(), PolyLess{});
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  out.generators = std::move(gens);
  return out;
}

// ---- Tdeg and stratiform bookkeeping ---------------------------------------

/// Catalog descriptor for Gelfand-Kirillov transcendence degree arithmetic:
/// polynomial and Laurent rings contribute their variable count; an Ore tower
/// adds one per step.
struct TdegDescriptor {
  enum class Kind { polynomial, laurent, ore_tower };
  Kind kind = Kind::polynomial;
  unsigned n = 0;                              // polynomial/laurent
  std::shared_ptr<TdegDescriptor> base;        // ore_tower
  unsigned steps = 0;                          // ore_tower

  static TdegDescriptor polynomial(unsigned n) { return {Kind::polynomial, n, nullptr, 0}; }
  static TdegDescriptor laurent(unsigned n) { return {Kind::laurent, n, nullptr, 0}; }
  static TdegDescriptor ore_tower(TdegDescriptor b, unsigned steps) {
    return {Kind::ore_tower, 0, std::make_shared<TdegDescriptor>(std::move(b)), steps};
  }
};

inline unsigned tdeg_catalog(const TdegDescriptor& d) {
  switch (d.kind) {
    case TdegDescriptor::Kind::polynomial:
    case TdegDescriptor::Kind::laurent:
      return d.n;
    case TdegDescriptor::Kind::ore_tower:
      return tdeg_catalog(*d.base) + d.steps;
  }
  return 0;
}

/// A declared stratiform chain: each step is finite or an Ore-fraction
/// (transcendental) extension.  Whether a declared chain is genuine is the
/// caller's responsibility; the length only counts the transcendental steps.
enum class StratStep { finite_over, ore_transcendental };

struct StratiformChain {
  std::vector<StratStep> steps;
};

inline unsigned stratiform_length(const StratiformChain& chain) {
  unsigned len = 0;
  for (auto s : chain.steps)
    if (s == StratStep::ore_transcendental) ++len;
  return len;
}

inline StratiformChain concat(const StratiformChain& a, const StratiformChain& b) {
  StratiformChain c = a;
  c.steps.insert(c.steps.end(), b.steps.begin(), b.steps.end());
  return c;
}

}  // namespace pforge

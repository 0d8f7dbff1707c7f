#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pforge/factor.hpp"
#include "pforge/groebner.hpp"
#include "pforge/linalg.hpp"
#include "pforge/poly.hpp"
#include "pforge/substitution.hpp"

namespace pforge {

enum class GradingClass { zero, quadratic, filtered_quadratic, general };
enum class JacobiStatus { unchecked, verified, failed };

inline const char* grading_class_name(GradingClass g) {
  switch (g) {
    case GradingClass::zero: return "zero";
    case GradingClass::quadratic: return "quadratic";
    case GradingClass::filtered_quadratic: return "filtered_quadratic";
    case GradingClass::general: return "general";
  }
  return "?";
}

inline const char* jacobi_status_name(JacobiStatus s) {
  switch (s) {
    case JacobiStatus::unchecked: return "unchecked";
    case JacobiStatus::verified: return "verified";
    case JacobiStatus::failed: return "failed";
  }
  return "?";
}

/// A Poisson bracket on k[x_1..x_n] given by the upper-triangular table
/// p_ij = {x_i, x_j} for i < j.  Immutable; verify_jacobi returns a new value
/// with the flag set.
class PoissonStructure {
 public:
  PoissonStructure(std::vector<std::string> names, std::vector<Poly> table)
      : names_(std::move(names)), table_(std::move(table)) {
    n_ = names_.size();
    if (table_.size() != n_ * (n_ - 1) / 2)
      fail(errc::arity_mismatch, "bracket table must have n(n-1)/2 entries");
    for (const auto& p : table_)
      if (p.nvars() != n_) fail(errc::arity_mismatch, "table entry arity");
    grading_ = compute_grading();
  }

  std::size_t nvars() const { return n_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Poly>& table() const { return table_; }
  GradingClass grading_class() const { return grading_; }
  JacobiStatus jacobi_status() const { return jacobi_; }
  const std::optional<std::array<std::size_t, 3>>& jacobi_witness() const {
    return witness_;
  }

  static std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
    // i < j; row-major over the strict upper triangle
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  }

  /// Table entry {x_i, x_j} for i < j.
  const Poly& entry(std::size_t i, std::size_t j) const {
    return table_[pair_index(i, j, n_)];
  }

  /// {x_i, x_j} for arbitrary i, j (antisymmetric; zero on the diagonal).
  Poly generator_bracket(std::size_t i, std::size_t j) const {
    if (i == j) return Poly::zero(n_);
    return i < j ? entry(i, j) : -entry(j, i);
  }

  std::size_t generator_index(const std::string& name) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (names_[i] == name) return i;
    fail(errc::unknown_generator, "no generator named '" + name + "'");
  }

  PoissonStructure with_jacobi(JacobiStatus s,
                               std::optional<std::array<std::size_t, 3>> w) const {
    PoissonStructure q = *this;
    q.jacobi_ = s;
    q.witness_ = w;
    return q;
  }

  friend bool operator==(const PoissonStructure& a, const PoissonStructure& b) {
    return a.names_ == b.names_ && a.table_ == b.table_;
  }

 private:
  GradingClass compute_grading() const {
    bool all_zero = true, quad = true, filt = true;
    for (const auto& p : table_) {
      if (p.is_zero()) continue;
      all_zero = false;
      if (!p.is_homogeneous_of_degree(2)) quad = false;
      if (p.total_degree() > 2) filt = false;
    }
    if (all_zero) return GradingClass::zero;
    if (quad) return GradingClass::quadratic;
    if (filt) return GradingClass::filtered_quadratic;
    return GradingClass::general;
  }

  std::size_t n_ = 0;
  std::vector<std::string> names_;
  std::vector<Poly> table_;
  JacobiStatus jacobi_ = JacobiStatus::unchecked;
  std::optional<std::array<std::size_t, 3>> witness_;
  GradingClass grading_ = GradingClass::zero;
};

/// Biderivation expansion:
/// {f,g} = sum_{i<j} p_ij (df/dx_i dg/dx_j - df/dx_j dg/dx_i).
inline Poly bracket(const PoissonStructure& P, const Poly& f, const Poly& g) {
  if (f.nvars() != P.nvars() || g.nvars() != P.nvars())
    fail(errc::arity_mismatch, "polynomials not in the structure's ring");
  std::size_t n = P.nvars();
  std::vector<Poly> df(n), dg(n);
  for (std::size_t i = 0; i < n; ++i) {
    df[i] = f.partial_derivative(i);
    dg[i] = g.partial_derivative(i);
  }
  Poly acc = Poly::zero(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Poly& p = P.entry(i, j);
      if (p.is_zero()) continue;
      acc = acc + p * (df[i] * dg[j] - df[j] * dg[i]);
    }
  }
  return acc;
}

/// {f,{g,h}} + {g,{h,f}} + {h,{f,g}}.
inline Poly jacobiator(const PoissonStructure& P, const Poly& f, const Poly& g,
                       const Poly& h) {
  return bracket(P, f, bracket(P, g, h)) + bracket(P, g, bracket(P, h, f)) +
         bracket(P, h, bracket(P, f, g));
}

/// Evaluate the jacobiator on all generator triples.  Vanishing there extends
/// to all polynomials by bilinearity and Leibniz.
inline PoissonStructure verify_jacobi(const PoissonStructure& P) {
  std::size_t n = P.nvars();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        Poly J = jacobiator(P, Poly::generator(n, i), Poly::generator(n, j),
                            Poly::generator(n, k));
        if (!J.is_zero())
          return P.with_jacobi(JacobiStatus::failed, std::array<std::size_t, 3>{i, j, k});
      }
  return P.with_jacobi(JacobiStatus::verified, std::nullopt);
}

/// True when the generator x_t brackets to zero with every generator.
inline bool is_central_generator(const PoissonStructure& P, std::size_t t) {
  for (std::size_t i = 0; i < P.nvars(); ++i)
    if (!P.generator_bracket(i, t).is_zero()) return false;
  return true;
}

/// Field basis of { z : deg z <= d, {z, x_i} = 0 for all i }, found by exact
/// linear solving over the coefficients of z; echelonized, sorted ascending.
inline std::vector<Poly> center_up_to_degree(const PoissonStructure& P, unsigned d) {
  std::size_t n = P.nvars();
  std::vector<Monomial> cols = monomials_up_to_degree(n, d);
  // Row space: (generator, result monomial) pairs.
  std::vector<Poly> col_brackets;
  col_brackets.reserve(cols.size() * n);
  std::map<std::pair<std::size_t, Monomial>, std::size_t,
           decltype([](const auto& a, const auto& b) {
             if (a.first != b.first) return a.first < b.first;
             return grlex_cmp(a.second, b.second) < 0;
           })>
      row_of;
  for (std::size_t ci = 0; ci < cols.size(); ++ci) {
    for (std::size_t g = 0; g < n; ++g) {
      Poly b = bracket(P, Poly::term(n, cols[ci], FieldElem::one()), Poly::generator(n, g));
      col_brackets.push_back(b);
      for (const auto& [m, c] : b.terms()) row_of.try_emplace({g, m}, 0);
    }
  }
  std::size_t nrows = 0;
  for (auto& [key, idx] : row_of) idx = nrows++;
  Mat mat(std::max<std::size_t>(nrows, 1), Vec(cols.size(), FieldElem::zero()));
  for (std::size_t ci = 0; ci < cols.size(); ++ci) {
    for (std::size_t g = 0; g < n; ++g) {
      const Poly& b = col_brackets[ci * n + g];
      for (const auto& [m, c] : b.terms()) mat[row_of[{g, m}]][ci] = c;
    }
  }
  std::vector<Vec> null = nullspace(std::move(mat), cols.size());
  std::vector<Poly> basis;
  for (const auto& v : null) {
    Poly z = Poly::zero(n);
    for (std::size_t ci = 0; ci < cols.size(); ++ci) z.add_term(cols[ci], v[ci]);
    basis.push_back(z);
  }
  std::sort(basis.begin(), basis.end(), PolyLess{});
  return basis;
}

enum class ClosureStatus { saturated, capped };

struct CommutatorIdeal {
  GroebnerBasis basis;
  ClosureStatus status = ClosureStatus::saturated;
};

/// The Poisson ideal generated by all table entries: close the ideal under
/// bracketing with generators until stable.  Elements above the degree cap
/// stop the closure; with allow_capped the truncated ideal is returned with
/// an explicit Capped status, otherwise that is a DegreeCapExceeded error.
inline CommutatorIdeal commutator_ideal(const PoissonStructure& P, unsigned degree_cap = 8,
                                        bool allow_capped = false) {
  std::size_t n = P.nvars();
  std::vector<Poly> gens;
  for (const auto& p : P.table())
    if (!p.is_zero()) gens.push_back(p);
  CommutatorIdeal out;
  out.basis = groebner_basis(gens);
  out.basis.nvars = n;
  if (gens.empty()) return out;
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Poly> fresh;
    for (const auto& g : out.basis.gens) {
      for (std::size_t i = 0; i < n; ++i) {
        Poly h = normal_form(bracket(P, g, Poly::generator(n, i)), out.basis);
        if (h.is_zero()) continue;
        if (h.total_degree() > int(degree_cap)) {
          if (!allow_capped)
            fail(errc::degree_cap_exceeded, "Poisson closure not stabilized within degree cap");
          out.status = ClosureStatus::capped;
          continue;
        }
        fresh.push_back(h);
      }
    }
    if (!fresh.empty()) {
      grew = true;
      for (const auto& h : fresh) gens.push_back(h);
      out.basis = groebner_basis(gens);
    }
  }
  return out;
}

/// {I, A} subseteq I checked on ideal generators against ring generators
/// (sufficient by the Leibniz rule on both arguments).
inline bool is_poisson_ideal(const PoissonStructure& P, const std::vector<Poly>& gens) {
  if (gens.empty()) fail(errc::invalid_argument, "empty generating set");
  for (const auto& g : gens)
    if (g.is_zero()) fail(errc::invalid_argument, "zero polynomial rejected as ideal generator");
  GroebnerBasis gb = groebner_basis(gens);
  for (const auto& g : gens)
    for (std::size_t i = 0; i < P.nvars(); ++i)
      if (!ideal_member(bracket(P, g, Poly::generator(P.nvars(), i)), gb)) return false;
  return true;
}

/// Monic irreducible divisors f of the table entries (degree <= d) with
/// f | {f, x_i} for all i.  Sound but not complete: candidates come from the
/// entries' bounded factorizations.
inline std::vector<Poly> principal_poisson_primes(const PoissonStructure& P, unsigned d) {
  std::vector<Poly> cands;
  for (const auto& p : P.table()) {
    if (p.is_zero()) continue;
    Factorization F = factor_bounded(p);
    if (!F.complete)
      fail(errc::factorization_unavailable, "a table entry exceeds the bounded factorizer");
    for (const auto& [g, mult] : F.factors) {
      if (g.total_degree() > int(d)) continue;
      bool seen = false;
      for (const auto& c : cands) seen = seen || c == g;
      if (!seen) cands.push_back(g);
    }
  }
  std::vector<Poly> primes;
  for (const auto& f : cands) {
    bool ok = true;
    for (std::size_t i = 0; ok && i < P.nvars(); ++i) {
      Poly b = bracket(P, f, Poly::generator(P.nvars(), i));
      ok = divide_exact(b, f).has_value();
    }
    if (ok) primes.push_back(f);
  }
  std::sort(primes.begin(), primes.end(), PolyLess{});
  return primes;
}

/// The bracket on A/I for a verified Poisson ideal I: compute then reduce.
class PoissonQuotient {
 public:
  PoissonQuotient(PoissonStructure P, GroebnerBasis gb)
      : structure_(std::move(P)), gb_(std::move(gb)) {}

  const PoissonStructure& structure() const { return structure_; }
  const GroebnerBasis& ideal() const { return gb_; }

  Poly reduce(const Poly& f) const { return normal_form(f, gb_); }
  Poly bracket(const Poly& f, const Poly& g) const {
    return reduce(pforge::bracket(structure_, f, g));
  }

 private:
  PoissonStructure structure_;
  GroebnerBasis gb_;
};

inline PoissonQuotient quotient_bracket(const PoissonStructure& P,
                                        const std::vector<Poly>& gens) {
  if (!is_poisson_ideal(P, gens))
    fail(errc::not_a_poisson_ideal, "generators do not span a Poisson ideal");
  return PoissonQuotient(P, groebner_basis(gens));
}

/// Substitute x_t := value and drop the generator (for fibers A/(t - value)).
inline Poly eval_generator(const Poly& f, std::size_t t, const FieldElem& value) {
  Poly r = Poly::zero(f.nvars());
  for (const auto& [m, c] : f.terms()) {
    Monomial mm = m;
    unsigned e = mm.exp[t];
    mm.exp[t] = 0;
    r.add_term(mm, c * value.pow(e));
  }
  return r;
}

/// The fiber A/(t - alpha) of a structure with central generator t, presented
/// on the remaining n-1 generators.
inline PoissonStructure fiber_structure(const PoissonStructure& P, std::size_t t,
                                        const FieldElem& alpha) {
  if (!is_central_generator(P, t)) fail(errc::not_central, "fiber variable is not Poisson central");
  std::size_t n = P.nvars();
  std::vector<std::size_t> keep;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i)
    if (i != t) {
      keep.push_back(i);
      names.push_back(P.names()[i]);
    }
  std::vector<std::size_t> perm(n, n);  // old index -> new index
  for (std::size_t k = 0; k < keep.size(); ++k) perm[keep[k]] = k;
  std::vector<Poly> table;
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = a + 1; b < keep.size(); ++b) {
      Poly p = eval_generator(P.entry(keep[a], keep[b]), t, alpha);
      table.push_back(p.reindexed(n - 1, perm));
    }
  return PoissonStructure(names, table);
}

/// Monic squarefree generator of { alpha : all table entries vanish mod
/// (t - alpha) }, as a univariate polynomial in the fiber parameter.
/// Returns 1 when no fiber is trivial and 0 when all are.
inline Poly trivial_fiber_discriminant(const PoissonStructure& P, std::size_t t) {
  if (!is_central_generator(P, t)) fail(errc::not_central, "generator is not Poisson central");
  std::size_t n = P.nvars();
  // Collect, across entries, the coefficient of every residual monomial as a
  // univariate polynomial in the parameter.
  std::map<Monomial, Poly, GrlexGreater> coeffs;  // rest-monomial -> poly in alpha
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (i == t || j == t) continue;
      for (const auto& [m, c] : P.entry(i, j).terms()) {
        Monomial rest = m;
        unsigned e = rest.exp[t];
        rest.exp[t] = 0;
        auto [it, inserted] = coeffs.try_emplace(rest, Poly::zero(1));
        Monomial am = Monomial::one(1);
        am.exp[0] = e;
        it->second.add_term(am, c);
      }
    }
  }
  if (coeffs.empty()) return Poly::zero(1);  // zero bracket: every fiber is trivial
  Poly g = Poly::zero(1);
  for (const auto& [m, c] : coeffs) g = univariate_gcd(g, c);
  if (g.is_constant()) return Poly::one(1);
  return squarefree_part(g, 0);
}

struct VeroneseCheck {
  bool closed = true;
  std::optional<std::pair<Monomial, Monomial>> witness;
};

/// For a graded quadratic structure, verify {A_{kd}, A_{ld}} lies in
/// A_{(k+l)d} on all monomial pairs up to the degree cap.
inline VeroneseCheck veronese_closure_check(const PoissonStructure& P, unsigned d,
                                            unsigned degree_cap) {
  if (d == 0) fail(errc::invalid_argument, "Veronese index must be positive");
  if (P.grading_class() != GradingClass::quadratic && P.grading_class() != GradingClass::zero)
    fail(errc::not_graded, "structure is not graded quadratic");
  std::size_t n = P.nvars();
  VeroneseCheck out;
  for (unsigned a = d; a <= degree_cap; a += d) {
    for (unsigned b = a; b <= degree_cap; b += d) {
      std::vector<Monomial> ma, mb;
      monomials_of_degree(n, a, ma);
      monomials_of_degree(n, b, mb);
      for (const auto& m1 : ma) {
        for (const auto& m2 : mb) {
          Poly br = bracket(P, Poly::term(n, m1, FieldElem::one()),
                            Poly::term(n, m2, FieldElem::one()));
          if (!br.is_homogeneous_of_degree(a + b)) {
            out.closed = false;
            out.witness = {m1, m2};
            return out;
          }
        }
      }
    }
  }
  return out;
}

/// Numerator/denominator pair for the localization bracket.
struct Fraction {
  Poly num;
  Poly den;
};

inline bool fractions_equal(const Fraction& a, const Fraction& b) {
  return a.num * b.den == b.num * a.den;  // cross-multiplication
}

/// Localization bracket
/// {a/s, b/t} = (1/st){a,b} - (a/s^2 t){s,b} - (b/t^2 s){a,t} + (ab/s^2 t^2){s,t},
/// assembled over the common denominator s^2 t^2 and reduced opportunistically
/// by the bounded factorizer (no full gcd over towers).
inline Fraction fraction_bracket(const PoissonStructure& P, const Fraction& fa,
                                 const Fraction& fb) {
  const Poly &a = fa.num, &s = fa.den, &b = fb.num, &t = fb.den;
  if (s.is_zero() || t.is_zero()) fail(errc::zero_denominator, "zero denominator");
  Poly num = bracket(P, a, b) * s * t - bracket(P, s, b) * a * t -
             bracket(P, a, t) * b * s + bracket(P, s, t) * a * b;
  Poly den = s * s * t * t;
  if (num.is_zero()) return {Poly::zero(P.nvars()), Poly::one(P.nvars())};
  // Opportunistic cancellation.
  Factorization F = factor_bounded(den);
  if (F.complete) {
    for (const auto& [g, mult] : F.factors) {
      for (unsigned k = 0; k < mult; ++k) {
        auto qn = divide_exact(num, g);
        if (!qn) break;
        auto qd = divide_exact(den, g);
        num = *qn;
        den = *qd;
      }
    }
  } else if (auto whole = divide_exact(num, den)) {
    num = *whole;
    den = Poly::one(P.nvars());
  }
  // Monic denominator; unit moves to the numerator.
  FieldElem lc = den.leading_coefficient();
  if (!lc.is_one()) {
    FieldElem inv = lc.inverse();
    num = inv * num;
    den = inv * den;
  }
  return {num, den};
}

/// Transport a structure along an invertible substitution:
/// q_ij = sigma( { sigma^{-1}(x_i), sigma^{-1}(x_j) } ).  The result is the
/// structure making sigma a Poisson isomorphism from P onto it.
inline PoissonStructure transport_structure(const PoissonStructure& P,
                                            const Substitution& s) {
  if (s.nvars() != P.nvars()) fail(errc::arity_mismatch, "substitution arity");
  std::size_t n = P.nvars();
  std::vector<Poly> table;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Poly b = bracket(P, s.inverse_images()[i], s.inverse_images()[j]);
      table.push_back(substitute(b, s));
    }
  return PoissonStructure(P.names(), table);
}

}  // namespace pforge

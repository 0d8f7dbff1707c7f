#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pforge/field.hpp"

namespace pforge {

/// Exponent vector, one entry per generator of the ambient ring.
struct Monomial {
  std::vector<unsigned> exp;

  static Monomial one(std::size_t nvars) { return Monomial{std::vector<unsigned>(nvars, 0)}; }
  static Monomial var(std::size_t nvars, std::size_t i) {
    Monomial m = one(nvars);
    m.exp[i] = 1;
    return m;
  }

  std::size_t nvars() const { return exp.size(); }
  unsigned total_degree() const {
    unsigned d = 0;
    for (unsigned e : exp) d += e;
    return d;
  }
  bool is_one() const { return total_degree() == 0; }

  bool divides(const Monomial& m) const {
    for (std::size_t i = 0; i < exp.size(); ++i)
      if (exp[i] > m.exp[i]) return false;
    return true;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (std::size_t i = 0; i < r.exp.size(); ++i) r.exp[i] += b.exp[i];
    return r;
  }
  /// Quotient, assuming divisibility.
  friend Monomial operator/(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (std::size_t i = 0; i < r.exp.size(); ++i) r.exp[i] -= b.exp[i];
    return r;
  }
  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (std::size_t i = 0; i < r.exp.size(); ++i) r.exp[i] = std::max(a.exp[i], b.exp[i]);
    return r;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.exp == b.exp; }
};

/// Graded lexicographic order: first by total degree, ties by exponent of the
/// earliest generator.  Fixed everywhere (canonical output, Groebner bases).
inline int grlex_cmp(const Monomial& a, const Monomial& b) {
  unsigned da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db ? -1 : 1;
  for (std::size_t i = 0; i < a.exp.size(); ++i) {
    if (a.exp[i] != b.exp[i]) return a.exp[i] < b.exp[i] ? -1 : 1;
  }
  return 0;
}

struct GrlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return grlex_cmp(a, b) > 0;
  }
};

/// Sparse multivariate polynomial over FieldElem.  Terms are kept in
/// graded-lex descending order (leading term first); no stored coefficient is
/// zero; all coefficients live on one merged tower.  Immutable in use: every
/// operation returns a new value.
class Poly {
 public:
  using TermMap = std::map<Monomial, FieldElem, GrlexGreater>;

  Poly() : nvars_(0), tower_(QuadTower::rationals()) {}

  static Poly zero(std::size_t nvars) {
    Poly p;
    p.nvars_ = nvars;
    return p;
  }
  static Poly constant(std::size_t nvars, const FieldElem& c) {
    Poly p = zero(nvars);
    p.add_term(Monomial::one(nvars), c);
    return p;
  }
  static Poly one(std::size_t nvars) { return constant(nvars, FieldElem::one()); }
  static Poly generator(std::size_t nvars, std::size_t i) {
    Poly p = zero(nvars);
    p.add_term(Monomial::var(nvars, i), FieldElem::one());
    return p;
  }
  static Poly term(std::size_t nvars, const Monomial& m, const FieldElem& c) {
    Poly p = zero(nvars);
    p.add_term(m, c);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  const TowerPtr& tower() const { return tower_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
  }
  FieldElem constant_coefficient() const { return coefficient(Monomial::one(nvars_)); }

  /// Total degree; -1 for the zero polynomial.
  int total_degree() const {
    return terms_.empty() ? -1 : int(terms_.begin()->first.total_degree());
  }
  int degree_in(std::size_t i) const {
    int d = terms_.empty() ? -1 : 0;
    for (const auto& [m, c] : terms_) d = std::max(d, int(m.exp[i]));
    return d;
  }

  const Monomial& leading_monomial() const { return terms_.begin()->first; }
  const FieldElem& leading_coefficient() const { return terms_.begin()->second; }

  FieldElem coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? FieldElem::zero() : it->second;
  }

  void add_term(const Monomial& m, const FieldElem& c) {
    if (m.nvars() != nvars_) fail(errc::arity_mismatch, "monomial arity");
    if (c.is_zero()) return;
    tower_ = merge_towers(tower_, c.tower());
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      FieldElem s = it->second + c;
      if (s.is_zero())
        terms_.erase(it);
      else
        it->second = s;
    }
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    check_arity(a, b);
    Poly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) {
    check_arity(a, b);
    Poly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
  }
  friend Poly operator-(const Poly& a) {
    Poly r = Poly::zero(a.nvars_);
    for (const auto& [m, c] : a.terms_) r.add_term(m, -c);
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    check_arity(a, b);
    Poly r = Poly::zero(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  friend Poly operator*(const FieldElem& c, const Poly& a) {
    Poly r = Poly::zero(a.nvars_);
    for (const auto& [m, ac] : a.terms_) r.add_term(m, c * ac);
    return r;
  }
  Poly pow(unsigned e) const {
    Poly r = Poly::one(nvars_);
    Poly base = *this;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    for (; ia != a.terms_.end(); ++ia, ++ib) {
      if (!(ia->first == ib->first) || ia->second != ib->second) return false;
    }
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly partial_derivative(std::size_t i) const {
    if (i >= nvars_) fail(errc::arity_mismatch, "generator index out of range");
    Poly r = Poly::zero(nvars_);
    for (const auto& [m, c] : terms_) {
      if (m.exp[i] == 0) continue;
      Monomial q = m;
      q.exp[i] -= 1;
      r.add_term(q, FieldElem(long(m.exp[i])) * c);
    }
    return r;
  }

  /// Sum of terms of total degree exactly k.
  Poly homogeneous_component(unsigned k) const {
    Poly r = Poly::zero(nvars_);
    for (const auto& [m, c] : terms_)
      if (m.total_degree() == k) r.add_term(m, c);
    return r;
  }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    unsigned d = terms_.begin()->first.total_degree();
    for (const auto& [m, c] : terms_)
      if (m.total_degree() != d) return false;
    return true;
  }
  bool is_homogeneous_of_degree(unsigned k) const {
    for (const auto& [m, c] : terms_)
      if (m.total_degree() != k) return false;
    return true;
  }

  Poly monic() const {
    if (is_zero()) return *this;
    return leading_coefficient().inverse() * *this;
  }

  FieldElem eval(const std::vector<FieldElem>& point) const {
    if (point.size() != nvars_) fail(errc::arity_mismatch, "evaluation point arity");
    FieldElem acc = FieldElem::zero();
    for (const auto& [m, c] : terms_) {
      FieldElem t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        if (m.exp[i]) t = t * point[i].pow(m.exp[i]);
      acc = acc + t;
    }
    return acc;
  }

  /// Same polynomial in a ring with extra trailing generators.
  Poly lifted(std::size_t new_nvars) const {
    if (new_nvars < nvars_) fail(errc::arity_mismatch, "cannot drop generators");
    Poly r = Poly::zero(new_nvars);
    for (const auto& [m, c] : terms_) {
      Monomial mm = Monomial::one(new_nvars);
      std::copy(m.exp.begin(), m.exp.end(), mm.exp.begin());
      r.add_term(mm, c);
    }
    return r;
  }

  /// Re-index generators: new_exp[perm[i]] = old_exp[i].  perm must be
  /// injective into [0, new_nvars).
  Poly reindexed(std::size_t new_nvars, const std::vector<std::size_t>& perm) const {
    Poly r = Poly::zero(new_nvars);
    for (const auto& [m, c] : terms_) {
      Monomial mm = Monomial::one(new_nvars);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (m.exp[i] && perm[i] >= new_nvars)
          fail(errc::arity_mismatch, "generator present but not mapped");
        if (m.exp[i]) mm.exp[perm[i]] += m.exp[i];
      }
      r.add_term(mm, c);
    }
    return r;
  }

 private:
  static void check_arity(const Poly& a, const Poly& b) {
    if (a.nvars_ != b.nvars_) fail(errc::arity_mismatch, "generator counts differ");
  }

  std::size_t nvars_;
  TowerPtr tower_;
  TermMap terms_;
};

/// Deterministic total order on polynomials: term-by-term, grlex-greater
/// monomial first, coefficient ties by canonical_compare.  Used for sorting
/// output lists, never for algebra.
inline int poly_cmp(const Poly& a, const Poly& b) {
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
    int mc = grlex_cmp(ia->first, ib->first);
    if (mc != 0) return mc;
    Ordering oc = canonical_compare(ia->second, ib->second);
    if (oc != Ordering::EQ) return oc == Ordering::LT ? -1 : 1;
  }
  if (ia != a.terms().end()) return 1;
  if (ib != b.terms().end()) return -1;
  return 0;
}
struct PolyLess {
  bool operator()(const Poly& a, const Poly& b) const { return poly_cmp(a, b) < 0; }
};

/// Exact quotient f / g, or nullopt when g does not divide f.
inline std::optional<Poly> divide_exact(const Poly& f, const Poly& g) {
  if (g.is_zero()) fail(errc::zero_divisor, "division by the zero polynomial");
  if (f.nvars() != g.nvars()) fail(errc::arity_mismatch, "generator counts differ");
  Poly rem = f;
  Poly quot = Poly::zero(f.nvars());
  while (!rem.is_zero()) {
    if (!g.leading_monomial().divides(rem.leading_monomial())) return std::nullopt;
    Monomial m = rem.leading_monomial() / g.leading_monomial();
    FieldElem c = rem.leading_coefficient() / g.leading_coefficient();
    Poly t = Poly::term(f.nvars(), m, c);
    quot = quot + t;
    rem = rem - t * g;
  }
  return quot;
}

/// All monomials in nvars generators of total degree exactly d, in descending
/// graded-lex order.
inline void monomials_of_degree(std::size_t nvars, unsigned d, std::vector<Monomial>& out) {
  Monomial m = Monomial::one(nvars);
  // Descending grlex within a degree block = descending lex on exponents.
  auto rec = [&](auto&& self, std::size_t i, unsigned rem) -> void {
    if (i + 1 == nvars) {
      m.exp[i] = rem;
      out.push_back(m);
      m.exp[i] = 0;
      return;
    }
    for (int e = int(rem); e >= 0; --e) {
      m.exp[i] = unsigned(e);
      self(self, i + 1, rem - unsigned(e));
    }
    m.exp[i] = 0;
  };
  if (nvars == 0) {
    if (d == 0) out.push_back(m);
    return;
  }
  rec(rec, 0, d);
}

/// All monomials of total degree <= d, descending graded-lex (degree d first).
inline std::vector<Monomial> monomials_up_to_degree(std::size_t nvars, unsigned d) {
  std::vector<Monomial> out;
  for (int k = int(d); k >= 0; --k) monomials_of_degree(nvars, unsigned(k), out);
  return out;
}

}  // namespace pforge

#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pforge/errors.hpp"
#include "pforge/rational.hpp"

namespace pforge {

class QuadTower;
class FieldElem;
using TowerPtr = std::shared_ptr<const QuadTower>;
TowerPtr adjoin(const TowerPtr& tower, const FieldElem& radicand);
FieldElem sqrt_or_adjoin(const FieldElem& a);

/// A tower of quadratic extensions of the rationals.  Level k is the field
/// Q(sqrt(r_1), ..., sqrt(r_k)) where r_i is an element of level i-1 that is
/// verifiably a non-square there.  Towers are immutable; adjoining returns a
/// new tower sharing its parent chain.
///
/// Elements of level k are coordinate vectors of length 2^k in the basis
/// indexed by subsets of {r_1,...,r_k}: basis[b] = prod_{i in bits(b)} sqrt(r_i).
class QuadTower {
 public:
  static TowerPtr rationals() {
    static const TowerPtr base(new QuadTower());
    return base;
  }

  std::size_t height() const { return height_; }
  std::size_t dim() const { return std::size_t(1) << height_; }

  const TowerPtr& parent() const { return parent_; }

  /// Coordinates (length 2^level) of the radicand adjoined at `level`
  /// (0-based: radicand(0) is r_1, a rational).
  const std::vector<Rational>& radicand(std::size_t level) const {
    const QuadTower* t = this;
    while (t->height_ != level + 1) t = t->parent_.get();
    return t->top_radicand_;
  }

  /// The prefix tower of the given height.
  static TowerPtr prefix(const TowerPtr& t, std::size_t h) {
    TowerPtr p = t;
    while (p->height_ > h) p = p->parent_;
    return p;
  }

  friend bool operator==(const QuadTower& a, const QuadTower& b) {
    if (&a == &b) return true;
    if (a.height_ != b.height_) return false;
    const QuadTower *x = &a, *y = &b;
    while (x->height_ > 0) {
      if (x == y) return true;
      if (x->top_radicand_ != y->top_radicand_) return false;
      x = x->parent_.get();
      y = y->parent_.get();
    }
    return true;
  }

  /// True when `a` is a structural prefix of `b`.
  static bool is_prefix(const QuadTower& a, const QuadTower& b) {
    if (a.height_ > b.height_) return false;
    const QuadTower* y = &b;
    while (y->height_ > a.height_) y = y->parent_.get();
    return a == *y;
  }

 private:
  QuadTower() : height_(0) {}
  QuadTower(TowerPtr parent, std::vector<Rational> radicand)
      : parent_(std::move(parent)),
        top_radicand_(std::move(radicand)),
        height_(parent_->height_ + 1) {}

  TowerPtr parent_;
  std::vector<Rational> top_radicand_;  // element of the parent level
  std::size_t height_;

  friend class FieldElem;
  friend TowerPtr adjoin(const TowerPtr&, const FieldElem&);
  friend FieldElem sqrt_or_adjoin(const FieldElem&);
};

namespace detail {

using Coords = std::vector<Rational>;

inline bool coords_zero(const Coords& a) {
  for (const auto& c : a) {
    if (c != 0) return false;
  }
  return true;
}

inline Coords coords_add(const Coords& a, const Coords& b) {
  Coords r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Coords coords_sub(const Coords& a, const Coords& b) {
  Coords r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Coords coords_neg(const Coords& a) {
  Coords r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline Coords coords_scale(const Coords& a, const Rational& s) {
  Coords r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

inline std::pair<Coords, Coords> coords_split(const Coords& a) {
  std::size_t m = a.size() / 2;
  return {Coords(a.begin(), a.begin() + m), Coords(a.begin() + m, a.end())};
}

inline Coords coords_join(const Coords& lo, const Coords& hi) {
  Coords r = lo;
  r.insert(r.end(), hi.begin(), hi.end());
  return r;
}

// Multiplication at the given level: F_L = F_{L-1}(sqrt(r)), with
// (a0 + a1*sqrt(r))(b0 + b1*sqrt(r)) = (a0*b0 + a1*b1*r) + (a0*b1 + a1*b0)*sqrt(r).
inline Coords coords_mul(const QuadTower& tw, std::size_t level, const Coords& a,
                         const Coords& b) {
  if (level == 0) return {a[0] * b[0]};
  auto [a0, a1] = coords_split(a);
  auto [b0, b1] = coords_split(b);
  const Coords& r = tw.radicand(level - 1);
  Coords lo = coords_add(coords_mul(tw, level - 1, a0, b0),
                         coords_mul(tw, level - 1, coords_mul(tw, level - 1, a1, b1), r));
  Coords hi = coords_add(coords_mul(tw, level - 1, a0, b1),
                         coords_mul(tw, level - 1, a1, b0));
  return coords_join(lo, hi);
}

// (u + v*sqrt(r))^{-1} = (u - v*sqrt(r)) / (u^2 - v^2 r); the denominator is
// nonzero because sqrt(r) is not in the lower level.
inline Coords coords_inv(const QuadTower& tw, std::size_t level, const Coords& a) {
  if (level == 0) {
    if (a[0] == 0) fail(errc::division_by_zero, "inverse of zero");
    return {Rational(1) / a[0]};
  }
  auto [u, v] = coords_split(a);
  const Coords& r = tw.radicand(level - 1);
  Coords d = coords_sub(coords_mul(tw, level - 1, u, u),
                        coords_mul(tw, level - 1, coords_mul(tw, level - 1, v, v), r));
  if (coords_zero(d)) fail(errc::division_by_zero, "inverse of zero");
  Coords di = coords_inv(tw, level - 1, d);
  return coords_join(coords_mul(tw, level - 1, u, di),
                     coords_neg(coords_mul(tw, level - 1, v, di)));
}

// Exact square root within the level, if one exists.  Write a = a0 + a1*sqrt(r)
// and x = u + v*sqrt(r); then x^2 = a forces either the degenerate cases
// (v = 0 or u = 0) or u^2 in {(a0 +- w)/2} with w^2 = a0^2 - a1^2 r.
inline std::optional<Coords> coords_try_sqrt(const QuadTower& tw, std::size_t level,
                                             const Coords& a) {
  if (level == 0) {
    Rational root;
    if (!rational_sqrt_exact(a[0], root)) return std::nullopt;
    return Coords{root};
  }
  auto [a0, a1] = coords_split(a);
  const Coords& r = tw.radicand(level - 1);
  std::size_t m = a0.size();
  if (coords_zero(a1)) {
    if (auto u = coords_try_sqrt(tw, level - 1, a0)) {
      return coords_join(*u, Coords(m, Rational(0)));
    }
    Coords q = coords_mul(tw, level - 1, a0, coords_inv(tw, level - 1, r));
    if (auto v = coords_try_sqrt(tw, level - 1, q)) {
      return coords_join(Coords(m, Rational(0)), *v);
    }
    return std::nullopt;
  }
  Coords s = coords_sub(coords_mul(tw, level - 1, a0, a0),
                        coords_mul(tw, level - 1, coords_mul(tw, level - 1, a1, a1), r));
  auto w = coords_try_sqrt(tw, level - 1, s);
  if (!w) return std::nullopt;
  for (int sign = 0; sign < 2; ++sign) {
    Coords cand = sign == 0 ? coords_add(a0, *w) : coords_sub(a0, *w);
    cand = coords_scale(cand, Rational(1, 2));
    if (coords_zero(cand)) continue;
    if (auto u = coords_try_sqrt(tw, level - 1, cand)) {
      if (coords_zero(*u)) continue;
      Coords half_inv_u =
          coords_scale(coords_inv(tw, level - 1, *u), Rational(1, 2));
      Coords v = coords_mul(tw, level - 1, a1, half_inv_u);
      return coords_join(*u, v);
    }
  }
  return std::nullopt;
}

}  // namespace detail

enum class Ordering { LT = -1, EQ = 0, GT = 1 };

/// Common tower of two elements: one radicand history must be a prefix of the
/// other, otherwise the towers conflict.
inline TowerPtr merge_towers(const TowerPtr& a, const TowerPtr& b) {
  if (*a == *b) return a->height() >= b->height() ? a : b;
  if (QuadTower::is_prefix(*a, *b)) return b;
  if (QuadTower::is_prefix(*b, *a)) return a;
  fail(errc::incompatible_towers, "radicand histories conflict");
}

/// An exact element of a quadratic tower: a coordinate vector of length
/// 2^height in the canonical multiplicative basis.  Immutable value type.
class FieldElem {
 public:
  FieldElem() : tower_(QuadTower::rationals()), coords_{Rational(0)} {}
  explicit FieldElem(const Rational& q)
      : tower_(QuadTower::rationals()), coords_{q} {}
  explicit FieldElem(long n) : FieldElem(Rational(n)) {}
  FieldElem(TowerPtr tower, std::vector<Rational> coords)
      : tower_(std::move(tower)), coords_(std::move(coords)) {
    if (coords_.size() != tower_->dim())
      fail(errc::invalid_argument, "coordinate vector does not match tower");
  }

  static FieldElem zero() { return FieldElem(Rational(0)); }
  static FieldElem one() { return FieldElem(Rational(1)); }

  const TowerPtr& tower() const { return tower_; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const { return detail::coords_zero(coords_); }
  bool is_one() const {
    if (coords_[0] != 1) return false;
    for (std::size_t i = 1; i < coords_.size(); ++i)
      if (coords_[i] != 0) return false;
    return true;
  }
  bool is_rational() const {
    for (std::size_t i = 1; i < coords_.size(); ++i)
      if (coords_[i] != 0) return false;
    return true;
  }
  Rational as_rational() const {
    if (!is_rational()) fail(errc::invalid_argument, "element is not rational");
    return coords_[0];
  }

  /// Re-express in an extension of the current tower (prefix embedding).
  FieldElem embedded(const TowerPtr& bigger) const {
    if (*tower_ == *bigger) return FieldElem(bigger, coords_);
    if (!QuadTower::is_prefix(*tower_, *bigger))
      fail(errc::incompatible_towers, "cannot embed into non-extension tower");
    std::vector<Rational> c(bigger->dim(), Rational(0));
    for (std::size_t i = 0; i < coords_.size(); ++i) c[i] = coords_[i];
    return FieldElem(bigger, std::move(c));
  }

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b) {
    TowerPtr t = merge_towers(a.tower_, b.tower_);
    return FieldElem(
        t, detail::coords_add(a.embedded(t).coords_, b.embedded(t).coords_));
  }
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b) {
    TowerPtr t = merge_towers(a.tower_, b.tower_);
    return FieldElem(
        t, detail::coords_sub(a.embedded(t).coords_, b.embedded(t).coords_));
  }
  friend FieldElem operator-(const FieldElem& a) {
    return FieldElem(a.tower_, detail::coords_neg(a.coords_));
  }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
    TowerPtr t = merge_towers(a.tower_, b.tower_);
    return FieldElem(t, detail::coords_mul(*t, t->height(),
                                           a.embedded(t).coords_,
                                           b.embedded(t).coords_));
  }
  FieldElem inverse() const {
    if (is_zero()) fail(errc::division_by_zero, "inverse of zero");
    return FieldElem(tower_,
                     detail::coords_inv(*tower_, tower_->height(), coords_));
  }
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) {
    if (b.is_zero()) fail(errc::division_by_zero, "division by zero");
    return a * b.inverse();
  }

  friend bool operator==(const FieldElem& a, const FieldElem& b) {
    TowerPtr t = merge_towers(a.tower_, b.tower_);
    return a.embedded(t).coords_ == b.embedded(t).coords_;
  }
  friend bool operator!=(const FieldElem& a, const FieldElem& b) {
    return !(a == b);
  }

  FieldElem pow(unsigned e) const {
    FieldElem r = FieldElem::one();
    FieldElem base = *this;
    while (e) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  /// Negate when the first nonzero coordinate (under the fixed coordinate
  /// order: highest basis index first) is negative.
  FieldElem sign_normalized() const {
    for (std::size_t i = coords_.size(); i-- > 0;) {
      if (coords_[i] != 0) return coords_[i] > 0 ? *this : -*this;
    }
    return *this;
  }

 private:
  TowerPtr tower_;
  std::vector<Rational> coords_;
};

/// Deterministic total order on canonical coordinate vectors: lexicographic
/// over the fixed basis, highest basis index first.  This is an encoding
/// order used for tie-breaking in normal forms, not a magnitude order.
inline Ordering canonical_compare(const FieldElem& a, const FieldElem& b) {
  TowerPtr t = merge_towers(a.tower(), b.tower());
  const FieldElem ea = a.embedded(t), eb = b.embedded(t);
  const auto& ca = ea.coords();
  const auto& cb = eb.coords();
  for (std::size_t i = ca.size(); i-- > 0;) {
    if (ca[i] < cb[i]) return Ordering::LT;
    if (ca[i] > cb[i]) return Ordering::GT;
  }
  return Ordering::EQ;
}

/// Square root within the element's own tower, if one exists; sign-normalized.
inline std::optional<FieldElem> try_sqrt(const FieldElem& a) {
  auto c = detail::coords_try_sqrt(*a.tower(), a.tower()->height(), a.coords());
  if (!c) return std::nullopt;
  return FieldElem(a.tower(), std::move(*c)).sign_normalized();
}

/// Adjoin sqrt(radicand) to the tower.  Construction fails when the radicand
/// is already a square at its level (the non-squareness invariant).
inline TowerPtr adjoin(const TowerPtr& tower, const FieldElem& radicand) {
  FieldElem r = radicand.embedded(tower);
  if (r.is_zero()) fail(errc::zero_input, "cannot adjoin sqrt(0)");
  if (try_sqrt(r))
    fail(errc::invalid_argument, "radicand is a square at its level");
  return TowerPtr(new QuadTower(tower, r.coords()));
}

/// Exact square root, adjoining one radicand when needed.  The returned root
/// satisfies root*root == a; its first nonzero canonical coordinate is
/// positive.  sqrt(0) is 0 with no adjunction.
inline FieldElem sqrt_or_adjoin(const FieldElem& a) {
  if (a.is_zero()) return a;
  if (auto r = try_sqrt(a)) return *r;
  TowerPtr t = TowerPtr(new QuadTower(a.tower(), a.coords()));
  std::vector<Rational> c(t->dim(), Rational(0));
  c[t->dim() / 2] = 1;  // the new basis element sqrt(a)
  return FieldElem(t, std::move(c));
}

// ---- printing -------------------------------------------------------------

inline std::string to_string(const FieldElem& a);

inline std::string radicand_string(const TowerPtr& tower, std::size_t level) {
  TowerPtr pref = QuadTower::prefix(tower, level);
  return to_string(FieldElem(pref, tower->radicand(level)));
}

/// Basis element for a subset index: "sqrt(r_i)*sqrt(r_j)*...".
inline std::string basis_string(const TowerPtr& tower, std::size_t index) {
  std::string s;
  for (std::size_t level = 0; level < tower->height(); ++level) {
    if (!(index & (std::size_t(1) << level))) continue;
    if (!s.empty()) s += "*";
    s += "sqrt(" + radicand_string(tower, level) + ")";
  }
  return s;
}

/// Canonical textual form: terms in ascending basis order, e.g.
/// "1/2 + 3*sqrt(2) - sqrt(5)".  Parses back to the same element.
inline std::string to_string(const FieldElem& a) {
  const auto& c = a.coords();
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    bool neg = c[i] < 0;
    Rational mag = neg ? Rational(-c[i]) : c[i];
    std::string term;
    if (i == 0) {
      term = rational_string(mag);
    } else {
      std::string b = basis_string(a.tower(), i);
      term = (mag == 1) ? b : rational_string(mag) + "*" + b;
    }
    if (out.empty()) {
      out = neg ? "-" + term : term;
    } else {
      out += neg ? " - " + term : " + " + term;
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace pforge

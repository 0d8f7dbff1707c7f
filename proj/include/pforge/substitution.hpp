#pragma once

#include <vector>

#include "pforge/linalg.hpp"
#include "pforge/poly.hpp"

namespace pforge {

enum class SubstKind { linear_homogeneous, graded, affine_filtered, polynomial };

inline const char* subst_kind_name(SubstKind k) {
  switch (k) {
    case SubstKind::linear_homogeneous: return "linear_homogeneous";
    case SubstKind::graded: return "graded";
    case SubstKind::affine_filtered: return "affine_filtered";
    case SubstKind::polynomial: return "polynomial";
  }
  return "?";
}

class Substitution;
Poly substitute(const Poly& f, const Substitution& s);

/// An invertible change of variables x_i -> images[i], with the inverse
/// stored alongside so that transports and witness compositions never have to
/// re-derive it.  Affine kinds are inverted by matrix inversion at
/// construction; the polynomial kind requires an explicit inverse and is
/// validated by round trip.
class Substitution {
 public:
  static Substitution identity(std::size_t nvars) {
    std::vector<Poly> ims;
    ims.reserve(nvars);
    for (std::size_t i = 0; i < nvars; ++i) ims.push_back(Poly::generator(nvars, i));
    Substitution s;
    s.images_ = ims;
    s.inverse_images_ = ims;
    s.kind_ = SubstKind::linear_homogeneous;
    return s;
  }

  /// x_i -> sum_j M[i][j] x'_j + shift[i].  Throws NonInvertibleSubstitution
  /// when the linear part is singular.
  static Substitution affine(const Mat& m, const Vec& shift) {
    std::size_t n = m.size();
    auto minv = pforge::inverse(m);
    if (!minv) fail(errc::non_invertible_substitution, "linear part is singular");
    Substitution s;
    bool homogeneous = true;
    for (std::size_t i = 0; i < n; ++i) {
      Poly img = Poly::constant(n, shift[i]);
      if (!shift[i].is_zero()) homogeneous = false;
      for (std::size_t j = 0; j < n; ++j)
        img = img + Poly::term(n, Monomial::var(n, j), m[i][j]);
      s.images_.push_back(img);
    }
    // x'_j = sum_k Minv[j][k] (x_k - shift[k])
    for (std::size_t j = 0; j < n; ++j) {
      Poly img = Poly::zero(n);
      for (std::size_t k = 0; k < n; ++k) {
        img = img + Poly::term(n, Monomial::var(n, k), (*minv)[j][k]);
        img = img - Poly::constant(n, (*minv)[j][k] * shift[k]);
      }
      s.inverse_images_.push_back(img);
    }
    s.kind_ = homogeneous ? SubstKind::linear_homogeneous : SubstKind::affine_filtered;
    return s;
  }

  static Substitution linear(const Mat& m) {
    return affine(m, Vec(m.size(), FieldElem::zero()));
  }

  /// Graded 3-variable substitution: (x,y) by an invertible 2x2 block mixed
  /// with t-multiples, t -> alpha*t.  Images are homogeneous of degree 1.
  static Substitution graded3(const Mat& xy_block, const Vec& t_coeffs,
                              const FieldElem& alpha) {
    if (alpha.is_zero()) fail(errc::non_invertible_substitution, "t must map to a nonzero multiple");
    Mat m(3, Vec(3, FieldElem::zero()));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) m[i][j] = xy_block[i][j];
    m[0][2] = t_coeffs[0];
    m[1][2] = t_coeffs[1];
    m[2][2] = alpha;
    Substitution s = linear(m);
    s.kind_ = SubstKind::graded;
    return s;
  }

  /// General polynomial automorphism given by images and explicit inverse
  /// images; validated by the round trip subst(inverse(x_i)) == x_i.
  static Substitution polynomial(std::vector<Poly> images, std::vector<Poly> inverse_images) {
    Substitution s;
    s.images_ = std::move(images);
    s.inverse_images_ = std::move(inverse_images);
    s.kind_ = SubstKind::polynomial;
    std::size_t n = s.images_.size();
    if (s.inverse_images_.size() != n)
      fail(errc::non_invertible_substitution, "inverse image count");
    Substitution inv = s.inverse();
    for (std::size_t i = 0; i < n; ++i) {
      if (substitute(s.inverse_images_[i], s) != Poly::generator(n, i) ||
          substitute(s.images_[i], inv) != Poly::generator(n, i))
        fail(errc::non_invertible_substitution, "images and inverse images do not cancel");
    }
    return s;
  }

  std::size_t nvars() const { return images_.size(); }
  const std::vector<Poly>& images() const { return images_; }
  const std::vector<Poly>& inverse_images() const { return inverse_images_; }
  SubstKind kind() const { return kind_; }

  Substitution inverse() const {
    Substitution s;
    s.images_ = inverse_images_;
    s.inverse_images_ = images_;
    s.kind_ = kind_;
    return s;
  }

  bool is_identity() const {
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i] != Poly::generator(images_.size(), i)) return false;
    return true;
  }

  /// Linear part as a matrix: row i = degree-1 coefficients of images[i].
  Mat linear_part() const {
    std::size_t n = nvars();
    Mat m(n, Vec(n, FieldElem::zero()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m[i][j] = images_[i].coefficient(Monomial::var(n, j));
    return m;
  }

  /// Apply this, then `next`.
  friend Substitution compose(const Substitution& first, const Substitution& next) {
    if (first.nvars() != next.nvars()) fail(errc::arity_mismatch, "substitution arity");
    Substitution s;
    for (const auto& im : first.images_) s.images_.push_back(substitute(im, next));
    Substitution first_inv = first.inverse();
    for (const auto& im : next.inverse_images_)
      s.inverse_images_.push_back(substitute(im, first_inv));
    auto rank = [](SubstKind k) {
      switch (k) {
        case SubstKind::graded: return 0;
        case SubstKind::linear_homogeneous: return 1;
        case SubstKind::affine_filtered: return 2;
        case SubstKind::polynomial: return 3;
      }
      return 3;
    };
    if (first.is_identity()) {
      s.kind_ = next.kind_;  // the identity belongs to every kind
    } else if (next.is_identity()) {
      s.kind_ = first.kind_;
    } else {
      s.kind_ = rank(first.kind_) >= rank(next.kind_) ? first.kind_ : next.kind_;
    }
    return s;
  }

 private:
  Substitution() = default;
  std::vector<Poly> images_;
  std::vector<Poly> inverse_images_;
  SubstKind kind_ = SubstKind::polynomial;
};

/// Replace generator i by s.images()[i], fully expanded and canonical.
inline Poly substitute(const Poly& f, const Substitution& s) {
  if (f.nvars() != s.nvars()) fail(errc::arity_mismatch, "substitution arity");
  std::size_t n = f.nvars();
  // Per-variable power cache.
  std::vector<std::vector<Poly>> powers(n);
  auto power = [&](std::size_t i, unsigned e) -> const Poly& {
    auto& cache = powers[i];
    if (cache.empty()) cache.push_back(Poly::one(n));
    while (cache.size() <= e) cache.push_back(cache.back() * s.images()[i]);
    return cache[e];
  };
  Poly acc = Poly::zero(n);
  for (const auto& [m, c] : f.terms()) {
    Poly t = Poly::constant(n, c);
    for (std::size_t i = 0; i < n; ++i)
      if (m.exp[i]) t = t * power(i, m.exp[i]);
    acc = acc + t;
  }
  return acc;
}

}  // namespace pforge

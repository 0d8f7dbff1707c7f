#pragma once

#include <optional>
#include <random>
#include <vector>

#include "pforge/poisson.hpp"

namespace pforge {

/// A derivation of k[x_1..x_n] given by its generator images, with
/// certification flags.  A flag is present only when the corresponding check
/// has passed; certifying returns a new value.
class PolyDerivation {
 public:
  struct Flags {
    bool poisson = false;
    bool alpha_compatible = false;
    std::optional<unsigned> lnd_within;  // least n with delta^n(x_i) = 0 for all i
  };

  explicit PolyDerivation(std::vector<Poly> images) : images_(std::move(images)) {
    for (const auto& p : images_)
      if (p.nvars() != images_.size())
        fail(errc::arity_mismatch, "derivation image arity");
  }

  static PolyDerivation zero(std::size_t n) {
    return PolyDerivation(std::vector<Poly>(n, Poly::zero(n)));
  }

  std::size_t nvars() const { return images_.size(); }
  const std::vector<Poly>& images() const { return images_; }
  const Flags& flags() const { return flags_; }

  bool is_zero() const {
    for (const auto& p : images_)
      if (!p.is_zero()) return false;
    return true;
  }

  /// delta(f) = sum_i df/dx_i * delta(x_i).
  Poly apply(const Poly& f) const {
    if (f.nvars() != nvars()) fail(errc::arity_mismatch, "derivation arity");
    Poly acc = Poly::zero(nvars());
    for (std::size_t i = 0; i < nvars(); ++i) {
      if (images_[i].is_zero()) continue;
      acc = acc + f.partial_derivative(i) * images_[i];
    }
    return acc;
  }

  PolyDerivation with_flags(Flags f) const {
    PolyDerivation d = *this;
    d.flags_ = f;
    return d;
  }

  friend bool operator==(const PolyDerivation& a, const PolyDerivation& b) {
    return a.images_ == b.images_;
  }

 private:
  std::vector<Poly> images_;
  Flags flags_;
};

/// alpha({a,b}) = {alpha(a), b} + {a, alpha(b)} checked on all generator
/// pairs; sufficient for the whole ring by the Leibniz rule.
inline bool is_poisson_derivation(const PoissonStructure& P, const PolyDerivation& a) {
  if (a.nvars() != P.nvars()) fail(errc::arity_mismatch, "derivation arity");
  std::size_t n = P.nvars();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Poly lhs = a.apply(P.entry(i, j));
      Poly rhs = bracket(P, a.images()[i], Poly::generator(n, j)) +
                 bracket(P, Poly::generator(n, i), a.images()[j]);
      if (lhs != rhs) return false;
    }
  return true;
}

/// delta({a,b}) = {delta(a),b} + {a,delta(b)} + alpha(a)delta(b) - delta(a)alpha(b)
/// on all generator pairs; reduces to is_poisson_derivation when alpha = 0.
inline bool is_poisson_alpha_derivation(const PoissonStructure& P, const PolyDerivation& d,
                                        const PolyDerivation& a) {
  if (!is_poisson_derivation(P, a))
    fail(errc::alpha_not_poisson, "alpha is not a Poisson derivation");
  std::size_t n = P.nvars();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Poly lhs = d.apply(P.entry(i, j));
      Poly rhs = bracket(P, d.images()[i], Poly::generator(n, j)) +
                 bracket(P, Poly::generator(n, i), d.images()[j]) +
                 a.images()[i] * d.images()[j] - d.images()[i] * a.images()[j];
      if (lhs != rhs) return false;
    }
  return true;
}

/// Least n <= bound with delta^n(x_i) = 0 for all generators; such an n
/// certifies local nilpotence on the whole ring (iterates of a derivation on
/// products spread over the factors).  nullopt is inconclusive, not a
/// disproof.
inline std::optional<unsigned> is_locally_nilpotent(const PolyDerivation& d, unsigned bound) {
  if (bound == 0) fail(errc::invalid_argument, "nilpotence bound must be positive");
  unsigned worst = 0;
  for (std::size_t i = 0; i < d.nvars(); ++i) {
    Poly it = Poly::generator(d.nvars(), i);
    unsigned steps = 0;
    while (!it.is_zero() && steps < bound) {
      it = d.apply(it);
      ++steps;
    }
    if (!it.is_zero()) return std::nullopt;
    // steps is the first m with delta^m(x_i) == 0 (m >= 1 since x_i != 0)
    worst = std::max(worst, steps);
  }
  return std::max(worst, 1u);
}

/// Basis of the space of derivations with image degree <= D satisfying the
/// Poisson-derivation identity, by exact linear solving over the unknown
/// image coefficients.  Every returned derivation carries the poisson flag.
inline std::vector<PolyDerivation> solve_poisson_derivations(const PoissonStructure& P,
                                                             unsigned image_degree_cap) {
  std::size_t n = P.nvars();
  std::vector<Monomial> mons = monomials_up_to_degree(n, image_degree_cap);
  std::size_t cols = n * mons.size();  // unknown c_{i,m}
  // Precompute the linear pieces of the identity per unknown.
  // For the pair (a,b):  sum_i c_{i,m} [ dp_ab/dx_i * m ]
  //                     - sum_m c_{a,m} {m, x_b} - sum_m c_{b,m} {x_a, m} = 0.
  std::vector<std::vector<Poly>> constraint(cols);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t mi = 0; mi < mons.size(); ++mi) {
      std::size_t col = i * mons.size() + mi;
      Poly m = Poly::term(n, mons[mi], FieldElem::one());
      constraint[col].reserve(pairs.size());
      for (auto [a, b] : pairs) {
        Poly piece = P.entry(a, b).partial_derivative(i) * m;
        if (i == a) piece = piece - bracket(P, m, Poly::generator(n, b));
        if (i == b) piece = piece - bracket(P, Poly::generator(n, a), m);
        constraint[col].push_back(piece);
      }
    }
  }
  // Assemble rows over (pair, monomial) keys.
  std::map<std::pair<std::size_t, Monomial>, std::size_t,
           decltype([](const auto& x, const auto& y) {
             if (x.first != y.first) return x.first < y.first;
             return grlex_cmp(x.second, y.second) < 0;
           })>
      row_of;
  for (std::size_t col = 0; col < cols; ++col)
    for (std::size_t pi = 0; pi < pairs.size(); ++pi)
      for (const auto& [m, c] : constraint[col][pi].terms()) row_of.try_emplace({pi, m}, 0);
  std::size_t nrows = 0;
  for (auto& [k, v] : row_of) v = nrows++;
  Mat mat(std::max<std::size_t>(nrows, 1), Vec(cols, FieldElem::zero()));
  for (std::size_t col = 0; col < cols; ++col)
    for (std::size_t pi = 0; pi < pairs.size(); ++pi)
      for (const auto& [m, c] : constraint[col][pi].terms())
        mat[row_of[{pi, m}]][col] = c;
  std::vector<Vec> null = nullspace(std::move(mat), cols);
  std::vector<PolyDerivation> basis;
  for (const auto& v : null) {
    std::vector<Poly> images(n, Poly::zero(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t mi = 0; mi < mons.size(); ++mi)
        images[i].add_term(mons[mi], v[i * mons.size() + mi]);
    PolyDerivation d(images);
    basis.push_back(d.with_flags({.poisson = true, .alpha_compatible = false, .lnd_within = {}}));
  }
  return basis;
}

/// Basis of { z : deg z <= d, delta(z) = 0 for all given derivations }.
inline std::vector<Poly> kernel_intersection_basis(const std::vector<PolyDerivation>& ds,
                                                   std::size_t nvars, unsigned d) {
  std::vector<Monomial> cols = monomials_up_to_degree(nvars, d);
  std::vector<Poly> images;  // per (derivation, column)
  images.reserve(ds.size() * cols.size());
  std::map<std::pair<std::size_t, Monomial>, std::size_t,
           decltype([](const auto& x, const auto& y) {
             if (x.first != y.first) return x.first < y.first;
             return grlex_cmp(x.second, y.second) < 0;
           })>
      row_of;
  for (std::size_t di = 0; di < ds.size(); ++di)
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      Poly b = ds[di].apply(Poly::term(nvars, cols[ci], FieldElem::one()));
      images.push_back(b);
      for (const auto& [m, c] : b.terms()) row_of.try_emplace({di, m}, 0);
    }
  std::size_t nrows = 0;
  for (auto& [k, v] : row_of) v = nrows++;
  Mat mat(std::max<std::size_t>(nrows, 1), Vec(cols.size(), FieldElem::zero()));
  for (std::size_t di = 0; di < ds.size(); ++di)
    for (std::size_t ci = 0; ci < cols.size(); ++ci) {
      const Poly& b = images[di * cols.size() + ci];
      for (const auto& [m, c] : b.terms()) mat[row_of[{di, m}]][ci] = c;
    }
  std::vector<Vec> null = nullspace(std::move(mat), cols.size());
  std::vector<Poly> basis;
  for (const auto& v : null) {
    Poly z = Poly::zero(nvars);
    for (std::size_t ci = 0; ci < cols.size(); ++ci) z.add_term(cols[ci], v[ci]);
    basis.push_back(z);
  }
  std::sort(basis.begin(), basis.end(), PolyLess{});
  return basis;
}

/// Degree-bounded over-approximation of the Poisson Makar-Limanov invariant:
/// intersect the kernels of every solver-found Poisson derivation certified
/// locally nilpotent within the bound.  Only discovered derivations are
/// intersected, so the result contains the true invariant's degree-<= d part.
/// An optional kernel constraint keeps only derivations annihilating it (the
/// d-relative variant); the default constraint 1 is annihilated by every
/// derivation.
struct PmlResult {
  std::vector<Poly> basis;
  bool rigid_within_bounds = false;  // no nonzero certified derivation found
  std::vector<PolyDerivation> certified;
  unsigned derivation_degree_cap = 0, nilpotence_bound = 0, kernel_degree_cap = 0;
};

inline PmlResult pml_over_approximation(const PoissonStructure& P, unsigned derivation_degree_cap,
                                        unsigned nilpotence_bound, unsigned kernel_degree_cap,
                                        const std::optional<Poly>& kernel_constraint = {}) {
  if (nilpotence_bound == 0 || kernel_degree_cap == 0)
    fail(errc::invalid_argument, "caps must be positive");
  PmlResult out;
  out.derivation_degree_cap = derivation_degree_cap;
  out.nilpotence_bound = nilpotence_bound;
  out.kernel_degree_cap = kernel_degree_cap;
  for (const auto& d : solve_poisson_derivations(P, derivation_degree_cap)) {
    auto n = is_locally_nilpotent(d, nilpotence_bound);
    if (!n) continue;
    if (kernel_constraint && !d.apply(*kernel_constraint).is_zero()) continue;
    auto flags = d.flags();
    flags.lnd_within = *n;
    out.certified.push_back(d.with_flags(flags));
  }
  out.rigid_within_bounds = out.certified.empty();
  if (out.rigid_within_bounds) {
    // Empty intersection convention: the full degree-bounded space.
    for (const auto& m : monomials_up_to_degree(P.nvars(), kernel_degree_cap))
      out.basis.push_back(Poly::term(P.nvars(), m, FieldElem::one()));
    std::sort(out.basis.begin(), out.basis.end(), PolyLess{});
  } else {
    out.basis = kernel_intersection_basis(out.certified, P.nvars(), kernel_degree_cap);
  }
  return out;
}

/// Random desk check of the factorially-closed property of locally nilpotent
/// derivations: genuine delta(ab) = 0 pairs (kernel times kernel) must have
/// both factors in the kernel, and kernel-times-nonkernel products must not
/// pretend to be in the kernel.  A witness indicates an implementation bug.
struct FactoriallyClosedReport {
  bool passed = true;
  std::optional<std::pair<Poly, Poly>> witness;
};

inline FactoriallyClosedReport factorially_closed_check(const PolyDerivation& d,
                                                        unsigned kernel_degree, unsigned trials,
                                                        std::uint64_t seed = 20240901) {
  if (!d.flags().lnd_within)
    fail(errc::invalid_argument, "derivation lacks an lnd certificate");
  FactoriallyClosedReport rep;
  std::size_t n = d.nvars();
  std::vector<Poly> kernel = kernel_intersection_basis({d}, n, kernel_degree);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  auto random_comb = [&](const std::vector<Poly>& basis) {
    Poly p = Poly::zero(n);
    for (const auto& b : basis) p = p + FieldElem(long(coef(rng))) * b;
    return p;
  };
  std::vector<Poly> all_mons;
  for (const auto& m : monomials_up_to_degree(n, kernel_degree))
    all_mons.push_back(Poly::term(n, m, FieldElem::one()));
  for (unsigned t = 0; t < trials; ++t) {
    Poly a = random_comb(kernel), b = random_comb(kernel);
    if (a.is_zero() || b.is_zero()) continue;
    Poly prod = a * b;
    if (!d.apply(prod).is_zero() || !d.apply(a).is_zero() || !d.apply(b).is_zero()) {
      rep.passed = false;
      rep.witness = {a, b};
      return rep;
    }
    // Adversarial side: a kernel element times a non-kernel element.  Only
    // pairs verified to have delta(ab) != 0 first are meaningful.
    Poly u = random_comb(all_mons);
    if (d.apply(u).is_zero()) continue;
    if (d.apply(a * u).is_zero() && !a.is_zero()) {
      rep.passed = false;
      rep.witness = {a, u};
      return rep;
    }
  }
  return rep;
}

}  // namespace pforge

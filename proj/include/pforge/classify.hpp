#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pforge/poisson.hpp"
#include "pforge/substitution.hpp"

namespace pforge {

enum class Family { C1, C2, C3, C4a, C4b, C4c, C5a, C5b };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::C1: return "C1";
    case Family::C2: return "C2";
    case Family::C3: return "C3";
    case Family::C4a: return "C4a";
    case Family::C4b: return "C4b";
    case Family::C4c: return "C4c";
    case Family::C5a: return "C5a";
    case Family::C5b: return "C5b";
  }
  return "?";
}

/// Normal-form label; lambda is present exactly for the C5a/C5b families and
/// is stored in canonical sign (the canonical_compare-minimal of {l, -l}).
struct NormalFormLabel {
  Family family;
  std::optional<FieldElem> lambda;
};

/// Replayable result: transporting the input bracket along subst yields the
/// normal form's bracket table exactly.
struct ClassificationCertificate {
  NormalFormLabel label;
  Substitution subst;
  TowerPtr tower;  // extensions adjoined during classification
};

inline PoissonStructure bivector_structure_2(const Poly& f) {
  return PoissonStructure({"x", "y"}, {f});
}
inline PoissonStructure bivector_structure_3(const Poly& f) {
  return PoissonStructure({"x", "y", "t"}, {f, Poly::zero(3), Poly::zero(3)});
}

/// The canonical bracket polynomial of a label.
inline Poly normal_form_poly(const NormalFormLabel& label, std::size_t arity) {
  std::size_t n = arity;
  Poly x = Poly::generator(n, 0), y = Poly::generator(n, 1);
  Poly one = Poly::one(n);
  Poly t = n == 3 ? Poly::generator(n, 2) : one;  // homogenizer in the graded case
  switch (label.family) {
    case Family::C1: return Poly::zero(n);
    case Family::C2: return t * t;
    case Family::C3: return x * t;
    case Family::C4a: return x * x;
    case Family::C4b: return x * x + t * t;
    case Family::C4c:
      if (n != 3) fail(errc::invalid_argument, "C4c exists only in the graded 3-variable setting");
      return x * x + y * t;
    case Family::C5a: return Poly::constant(n, *label.lambda) * x * y;
    case Family::C5b: return Poly::constant(n, *label.lambda) * x * y + t * t;
  }
  fail(errc::invalid_argument, "bad label");
}

namespace detail {

inline Poly transport_bracket(const Poly& f, const Substitution& s) {
  if (f.nvars() == 2) return transport_structure(bivector_structure_2(f), s).table()[0];
  PoissonStructure Q = transport_structure(bivector_structure_3(f), s);
  if (!Q.table()[1].is_zero() || !Q.table()[2].is_zero())
    throw std::logic_error("transport left the t-central shape");
  return Q.table()[0];
}

struct ClassifyState {
  Poly cur;
  Substitution total;

  void step(const Substitution& s) {
    cur = transport_bracket(cur, s);
    total = compose(total, s);
  }
};

inline FieldElem coeff_of_var(const Poly& f, std::size_t i) {
  return f.coefficient(Monomial::var(f.nvars(), i));
}

}  // namespace detail

enum class QuadraticForm { zero, square, product };

struct F2NormalForm {
  QuadraticForm form = QuadraticForm::zero;
  std::optional<FieldElem> lambda;  // canonical sign, product case
  Substitution subst = Substitution::identity(2);
};

/// Normalize a homogeneous binary quadratic to 0, x^2 or lambda*xy under an
/// invertible linear substitution (bivector transport).  Rank 1 goes to the
/// square, rank 2 to the product; lambda comes out of the determinant twist
/// and is reported in canonical sign.
inline F2NormalForm normalize_f2(const Poly& f2) {
  if (f2.nvars() != 2) fail(errc::arity_mismatch, "binary quadratic expected");
  F2NormalForm out;
  if (f2.is_zero()) return out;
  if (!f2.is_homogeneous_of_degree(2))
    fail(errc::not_homogeneous, "not homogeneous of degree 2");
  std::size_t n = 2;
  Monomial mx2 = Monomial{{2, 0}}, mxy = Monomial{{1, 1}}, my2 = Monomial{{0, 2}};
  FieldElem A = f2.coefficient(mx2), B = f2.coefficient(mxy), C = f2.coefficient(my2);
  FieldElem disc = B * B - FieldElem(4) * A * C;
  if (disc.is_zero()) {
    out.form = QuadraticForm::square;
    // f2 = c * l^2; send l to a plain square.
    FieldElem c, p, q;
    if (!A.is_zero()) {
      c = A;
      p = FieldElem::one();
      q = B / (FieldElem(2) * A);
    } else {
      c = C;
      p = FieldElem::zero();
      q = FieldElem::one();
    }
    Mat m(2, Vec(2, FieldElem::zero()));
    if (!p.is_zero()) {
      // x -> x'/(c p) - q y', y -> p y'
      m[0][0] = (c * p).inverse();
      m[0][1] = -q;
      m[1][1] = p;
    } else {
      // x -> -c q^2 y', y -> x'
      m[0][1] = -(c * q * q);
      m[1][0] = FieldElem::one();
    }
    out.subst = Substitution::linear(m);
  } else {
    out.form = QuadraticForm::product;
    // f2 = c * l1 * l2 with independent factors; substitute by L^{-1} so that
    // l1 -> x', l2 -> y'; the transported coefficient is c * det(L).
    Mat L(2, Vec(2, FieldElem::zero()));
    FieldElem c;
    if (!A.is_zero()) {
      FieldElem s = sqrt_or_adjoin(disc);
      FieldElem r1 = (-B + s) / (FieldElem(2) * A);
      FieldElem r2 = (-B - s) / (FieldElem(2) * A);
      L = {{FieldElem::one(), -r1}, {FieldElem::one(), -r2}};
      c = A;
    } else if (!C.is_zero()) {
      // f2 = y (Bx + Cy)
      L = {{FieldElem::zero(), FieldElem::one()}, {B, C}};
      c = FieldElem::one();
    } else {
      L = {{FieldElem::one(), FieldElem::zero()}, {FieldElem::zero(), B}};
      c = FieldElem::one();
    }
    FieldElem detL = L[0][0] * L[1][1] - L[0][1] * L[1][0];
    auto Linv = inverse(L);
    if (!Linv) fail(errc::non_invertible_substitution, "degenerate factor matrix");
    out.subst = Substitution::linear(*Linv);
    FieldElem lambda = c * detL;
    if (canonical_compare(lambda, -lambda) == Ordering::GT) {
      // Swap the factors to flip the sign into canon.
      Mat swap = {{FieldElem::zero(), FieldElem::one()}, {FieldElem::one(), FieldElem::zero()}};
      out.subst = compose(out.subst, Substitution::linear(swap));
      lambda = -lambda;
    }
    out.lambda = lambda;
  }
  // The recipes above are exact; replay to be sure.
  Poly got = detail::transport_bracket(f2, out.subst);
  Poly want = out.form == QuadraticForm::square
                  ? Poly::generator(n, 0) * Poly::generator(n, 0)
                  : Poly::constant(n, *out.lambda) * Poly::generator(n, 0) * Poly::generator(n, 1);
  if (got != want) throw std::logic_error("normalize_f2 replay failed");
  return out;
}

/// Complete case analysis for a filtered quadratic bracket {x,y} = f on
/// k[x,y] (deg f <= 2): returns the normal-form label and a substitution whose
/// replay carries f onto the normal form exactly.
inline ClassificationCertificate classify_2var(const Poly& f) {
  if (f.nvars() != 2) fail(errc::arity_mismatch, "two-variable bracket expected");
  if (f.total_degree() > 2) fail(errc::degree_too_high, "bracket degree exceeds 2");
  std::size_t n = 2;
  detail::ClassifyState st{f, Substitution::identity(2)};
  NormalFormLabel label{Family::C1, std::nullopt};
  FieldElem one = FieldElem::one(), zero = FieldElem::zero();

  auto affine_shift = [&](const FieldElem& dx, const FieldElem& dy) {
    Mat id = {{one, zero}, {zero, one}};
    return Substitution::affine(id, {dx, dy});
  };

  auto settle_f2_zero = [&]() {
    // f = a x + b y + c
    FieldElem a = detail::coeff_of_var(st.cur, 0);
    FieldElem b = detail::coeff_of_var(st.cur, 1);
    FieldElem c = st.cur.constant_coefficient();
    if (a.is_zero() && b.is_zero()) {
      // f = c, c != 0: substitute x -> c x'
      st.step(Substitution::linear({{c, zero}, {zero, one}}));
      label.family = Family::C2;
      return;
    }
    if (a.is_zero()) {
      st.step(Substitution::linear({{zero, one}, {one, zero}}));  // switch x and y
      a = detail::coeff_of_var(st.cur, 0);
      b = detail::coeff_of_var(st.cur, 1);
      c = st.cur.constant_coefficient();
    }
    // x -> x' - b y' - c/a, y -> a y'
    st.step(Substitution::affine({{one, -b}, {zero, a}}, {-(c / a), zero}));
    label.family = Family::C3;
  };

  if (st.cur.is_zero()) {
    label.family = Family::C1;
  } else if (st.cur.homogeneous_component(2).is_zero()) {
    settle_f2_zero();
  } else {
    F2NormalForm nf2 = normalize_f2(st.cur.homogeneous_component(2));
    st.step(nf2.subst);
    if (nf2.form == QuadraticForm::square) {
      // f = x^2 + a x + b y + c
      FieldElem a = detail::coeff_of_var(st.cur, 0);
      FieldElem b = detail::coeff_of_var(st.cur, 1);
      FieldElem c = st.cur.constant_coefficient();
      if (b.is_zero()) {
        if (!a.is_zero()) {
          st.step(affine_shift(-(a / FieldElem(2)), zero));  // x -> x' - a/2
          c = st.cur.constant_coefficient();
        }
        if (c.is_zero()) {
          label.family = Family::C4a;
        } else {
          FieldElem s = sqrt_or_adjoin(c);
          st.step(Substitution::linear({{s, zero}, {zero, s}}));
          label.family = Family::C4b;
        }
      } else {
        // b != 0: let w be a root of w^2 + a w + c = 1, then
        // x -> b x' + w, y -> -(a + 2w) x' + b y' lands on x^2 + y + const.
        FieldElem sd = sqrt_or_adjoin(a * a - FieldElem(4) * (c - one));
        FieldElem w = (-a + sd) / FieldElem(2);
        st.step(Substitution::affine({{b, zero}, {-(a + FieldElem(2) * w), b}}, {w, zero}));
        // Compose with x -> -y', y -> x' - y'^2 to reach degree one.
        Poly px = -Poly::generator(n, 1);
        Poly py = Poly::generator(n, 0) - Poly::generator(n, 1) * Poly::generator(n, 1);
        Poly ix = Poly::generator(n, 1) + Poly::generator(n, 0) * Poly::generator(n, 0);
        Poly iy = -Poly::generator(n, 0);
        st.step(Substitution::polynomial({px, py}, {ix, iy}));
        settle_f2_zero();
      }
    } else {
      // f = lambda x y + a x + b y + c
      FieldElem lambda = *nf2.lambda;
      FieldElem a = detail::coeff_of_var(st.cur, 0);
      FieldElem b = detail::coeff_of_var(st.cur, 1);
      st.step(affine_shift(-(b / lambda), -(a / lambda)));
      FieldElem c = st.cur.constant_coefficient();
      if (c.is_zero()) {
        label.family = Family::C5a;
      } else {
        st.step(Substitution::linear({{c, zero}, {zero, one}}));
        label.family = Family::C5b;
      }
      label.lambda = lambda;
    }
  }
  Poly nf = normal_form_poly(label, 2);
  if (st.cur != nf) throw std::logic_error("classification replay failed");
  return {label, st.total, st.cur.tower()};
}

/// Graded case analysis on k[x,y,t] with t Poisson central and {x,y} = f
/// homogeneous of degree 2.  Substitutions are graded and send t to a nonzero
/// multiple of itself.
inline ClassificationCertificate classify_3var_graded(const Poly& f) {
  if (f.nvars() != 3) fail(errc::arity_mismatch, "three-variable bracket expected");
  if (!f.is_homogeneous_of_degree(2) && !f.is_zero())
    fail(errc::not_homogeneous, "bracket must be homogeneous of degree 2");
  FieldElem one = FieldElem::one(), zero = FieldElem::zero();
  Mat id2 = {{one, zero}, {zero, one}};
  detail::ClassifyState st{f, Substitution::identity(3)};
  NormalFormLabel label{Family::C1, std::nullopt};

  auto coeff = [&](unsigned ex, unsigned ey, unsigned et) {
    return st.cur.coefficient(Monomial{{ex, ey, et}});
  };
  auto xy_part = [&]() {  // the t-free quadratic, as a binary quadratic
    Poly q = Poly::zero(2);
    q.add_term(Monomial{{2, 0}}, coeff(2, 0, 0));
    q.add_term(Monomial{{1, 1}}, coeff(1, 1, 0));
    q.add_term(Monomial{{0, 2}}, coeff(0, 2, 0));
    return q;
  };

  if (st.cur.is_zero()) {
    label.family = Family::C1;
  } else if (xy_part().is_zero()) {
    FieldElem a = coeff(1, 0, 1), b = coeff(0, 1, 1), c = coeff(0, 0, 2);
    if (a.is_zero() && b.is_zero()) {
      st.step(Substitution::graded3({{c, zero}, {zero, one}}, {zero, zero}, one));
      label.family = Family::C2;
    } else {
      if (a.is_zero()) {
        st.step(Substitution::graded3({{zero, one}, {one, zero}}, {zero, zero}, one));
        a = coeff(1, 0, 1);
        b = coeff(0, 1, 1);
        c = coeff(0, 0, 2);
      }
      // x -> x' - b y' - (c/a) t', y -> a y'
      st.step(Substitution::graded3({{one, -b}, {zero, a}}, {-(c / a), zero}, one));
      label.family = Family::C3;
    }
  } else {
    F2NormalForm nf2 = normalize_f2(xy_part());
    st.step(Substitution::graded3(nf2.subst.linear_part(), {zero, zero}, one));
    if (nf2.form == QuadraticForm::square) {
      // f = x^2 + a xt + b yt + c t^2
      FieldElem a = coeff(1, 0, 1);
      if (!a.is_zero())
        st.step(Substitution::graded3(id2, {-(a / FieldElem(2)), zero}, one));
      FieldElem b = coeff(0, 1, 1), c = coeff(0, 0, 2);
      if (!b.is_zero()) {
        if (!c.is_zero())
          st.step(Substitution::graded3(id2, {zero, -(c / b)}, one));
        // x^2 + b y t: rescale t to absorb b.
        st.step(Substitution::graded3(id2, {zero, zero}, b.inverse()));
        label.family = Family::C4c;
      } else if (c.is_zero()) {
        label.family = Family::C4a;
      } else {
        FieldElem s = sqrt_or_adjoin(c);
        st.step(Substitution::graded3({{s, zero}, {zero, s}}, {zero, zero}, one));
        label.family = Family::C4b;
      }
    } else {
      FieldElem lambda = *nf2.lambda;
      FieldElem a = coeff(1, 0, 1), b = coeff(0, 1, 1);
      st.step(Substitution::graded3(id2, {-(b / lambda), -(a / lambda)}, one));
      FieldElem c = coeff(0, 0, 2);
      if (c.is_zero()) {
        label.family = Family::C5a;
      } else {
        st.step(Substitution::graded3({{c, zero}, {zero, one}}, {zero, zero}, one));
        label.family = Family::C5b;
      }
      label.lambda = lambda;
    }
  }
  Poly nf = normal_form_poly(label, 3);
  if (st.cur != nf) throw std::logic_error("classification replay failed");
  return {label, st.total, st.cur.tower()};
}

/// Check a certificate against its input: transporting the input bivector
/// along the substitution must reproduce the normal form's table exactly.
inline bool replay(const Poly& input, const ClassificationCertificate& cert) {
  std::size_t n = input.nvars();
  PoissonStructure in = n == 2 ? bivector_structure_2(input) : bivector_structure_3(input);
  PoissonStructure want = n == 2 ? bivector_structure_2(normal_form_poly(cert.label, 2))
                                 : bivector_structure_3(normal_form_poly(cert.label, 3));
  return transport_structure(in, cert.subst) == want;
}

/// The separating data the nonisomorphism arguments use: centers, commutator
/// ideal, principal Poisson primes.
struct InvariantFingerprint {
  std::vector<Poly> center_basis_deg4;
  GroebnerBasis commutator_ideal;
  std::vector<Poly> principal_primes_deg2;
};

inline bool operator==(const InvariantFingerprint& a, const InvariantFingerprint& b) {
  return a.center_basis_deg4 == b.center_basis_deg4 &&
         a.commutator_ideal == b.commutator_ideal &&
         a.principal_primes_deg2 == b.principal_primes_deg2;
}

inline InvariantFingerprint fingerprint(const PoissonStructure& P, unsigned closure_cap = 8) {
  InvariantFingerprint fp;
  fp.center_basis_deg4 = center_up_to_degree(P, 4);
  fp.commutator_ideal = commutator_ideal(P, closure_cap).basis;
  fp.principal_primes_deg2 = principal_poisson_primes(P, 2);
  return fp;
}

struct IsoResult {
  bool isomorphic = false;
  std::optional<Substitution> witness;    // composed certificate substitutions
  std::string separating;                 // which fingerprint field says no
};

/// Labels match (lambda up to the documented sign canon) iff isomorphic; a
/// yes carries the composed substitution, a no names the separating
/// invariant.
inline IsoResult isomorphic_quadratic(const Poly& f, const Poly& g, std::size_t arity) {
  ClassificationCertificate cf = arity == 2 ? classify_2var(f) : classify_3var_graded(f);
  ClassificationCertificate cg = arity == 2 ? classify_2var(g) : classify_3var_graded(g);
  IsoResult out;
  bool same_family = cf.label.family == cg.label.family;
  bool same_lambda = (!cf.label.lambda && !cg.label.lambda) ||
                     (cf.label.lambda && cg.label.lambda && *cf.label.lambda == *cg.label.lambda);
  if (same_family && same_lambda) {
    out.isomorphic = true;
    Substitution w = compose(cf.subst, cg.subst.inverse());
    PoissonStructure from = arity == 2 ? bivector_structure_2(f) : bivector_structure_3(f);
    PoissonStructure to = arity == 2 ? bivector_structure_2(g) : bivector_structure_3(g);
    if (!(transport_structure(from, w) == to))
      throw std::logic_error("isomorphism witness replay failed");
    out.witness = w;
    return out;
  }
  if (same_family) {
    out.separating = "lambda";
    return out;
  }
  PoissonStructure nf = arity == 2 ? bivector_structure_2(normal_form_poly(cf.label, 2))
                                   : bivector_structure_3(normal_form_poly(cf.label, 3));
  PoissonStructure ng = arity == 2 ? bivector_structure_2(normal_form_poly(cg.label, 2))
                                   : bivector_structure_3(normal_form_poly(cg.label, 3));
  InvariantFingerprint pf = fingerprint(nf), pg = fingerprint(ng);
  if (!(pf.center_basis_deg4 == pg.center_basis_deg4))
    out.separating = "center_basis_deg4";
  else if (!(pf.principal_primes_deg2 == pg.principal_primes_deg2))
    out.separating = "principal_primes_deg2";
  else if (!(pf.commutator_ideal == pg.commutator_ideal))
    out.separating = "commutator_ideal";
  else
    out.separating = "label";  // distinct families with equal desk fingerprints
  return out;
}

}  // namespace pforge

#pragma once

#include <algorithm>
#include <vector>

#include "pforge/groebner.hpp"
#include "pforge/linalg.hpp"
#include "pforge/poly.hpp"

namespace pforge {

/// Result of bounded factorization.  `complete` is false when the input lies
/// outside the supported shapes; `unknown` then carries the monic unfactored
/// part (the RequiresOracle case).  Factors are monic and irreducible over
/// the (possibly extended) tower; unit * prod(factors^mult) * unknown == f.
struct Factorization {
  bool complete = true;
  FieldElem unit = FieldElem::one();
  std::vector<std::pair<Poly, unsigned>> factors;
  Poly unknown;  // monic, nonconstant only when !complete

  void push(const Poly& monic_factor, unsigned mult) {
    for (auto& [g, m] : factors) {
      if (g == monic_factor) {
        m += mult;
        return;
      }
    }
    factors.emplace_back(monic_factor, mult);
  }
};

namespace detail {

inline std::vector<std::size_t> occurring_vars(const Poly& f) {
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < f.nvars(); ++i)
    if (f.degree_in(i) > 0) vars.push_back(i);
  return vars;
}

// Symmetric matrix of the homogenized quadratic over occurring vars + a
// homogenizer slot (last index).
inline Mat conic_matrix(const Poly& f, const std::vector<std::size_t>& vars) {
  std::size_t k = vars.size();
  Mat m(k + 1, Vec(k + 1, FieldElem::zero()));
  auto pos = [&](std::size_t v) {
    return std::size_t(std::find(vars.begin(), vars.end(), v) - vars.begin());
  };
  FieldElem half(Rational(1, 2));
  for (const auto& [mon, c] : f.terms()) {
    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < mon.exp.size(); ++i)
      for (unsigned e = 0; e < mon.exp[i]; ++e) present.push_back(i);
    if (present.size() == 2) {
      std::size_t a = pos(present[0]), b = pos(present[1]);
      if (a == b) {
        m[a][a] = m[a][a] + c;
      } else {
        m[a][b] = m[a][b] + half * c;
        m[b][a] = m[b][a] + half * c;
      }
    } else if (present.size() == 1) {
      std::size_t a = pos(present[0]);
      m[a][k] = m[a][k] + half * c;
      m[k][a] = m[k][a] + half * c;
    } else {
      m[k][k] = m[k][k] + c;
    }
  }
  return m;
}

// Affine-linear form from a row vector over (vars..., homogenizer).
inline Poly linear_form(std::size_t nvars, const std::vector<std::size_t>& vars,
                        const Vec& row) {
  Poly p = Poly::constant(nvars, row.back());
  for (std::size_t i = 0; i < vars.size(); ++i)
    p = p + Poly::term(nvars, Monomial::var(nvars, vars[i]), row[i]);
  return p;
}

[[noreturn]] inline void conic_bug() {
  throw std::logic_error("conic factorization identity violated");
}

// Degree-2 polynomial: splits into two affine-linear factors iff the
// homogenized symmetric matrix has rank <= 2 (char 0); one square root
// adjunction may be needed.
inline void factor_conic(const Poly& f, Factorization& out) {
  std::vector<std::size_t> vars = occurring_vars(f);
  Mat m = conic_matrix(f, vars);
  std::size_t dim = m.size();
  std::size_t r = rank(m);
  if (r >= 3) {
    out.unit = out.unit * f.leading_coefficient();
    out.push(f.monic(), 1);
    return;
  }
  std::size_t diag = dim;
  for (std::size_t i = 0; i < dim - 1; ++i) {  // homogenizer slot cannot be the only pivot
    if (!m[i][i].is_zero()) {
      diag = i;
      break;
    }
  }
  if (r == 1) {
    if (diag == dim) conic_bug();
    FieldElem a = m[diag][diag];
    Vec row = m[diag];
    for (auto& x : row) x = x / a;
    Poly l = linear_form(f.nvars(), vars, row);
    if (a * l * l != f) conic_bug();
    FieldElem lc = l.leading_coefficient();
    out.unit = out.unit * a * lc * lc;
    out.push(l.monic(), 2);
    return;
  }
  // r == 2
  if (diag != dim) {
    FieldElem a = m[diag][diag];
    Vec row = m[diag];
    for (auto& x : row) x = x / a;
    Poly l1 = linear_form(f.nvars(), vars, row);
    Poly q1 = f - a * l1 * l1;
    if (q1.is_zero()) conic_bug();  // would be rank 1
    // q1 is rank one: c * l2^2 with l2 possibly constant.
    FieldElem c;
    Poly l2;
    if (q1.is_constant()) {
      c = q1.constant_coefficient();
      l2 = Poly::one(f.nvars());
    } else {
      std::vector<std::size_t> vars1 = occurring_vars(q1);
      Mat m1 = conic_matrix(q1, vars1);
      std::size_t d1 = m1.size();
      std::size_t j = d1;
      for (std::size_t i = 0; i < d1; ++i) {
        if (!m1[i][i].is_zero()) {
          j = i;
          break;
        }
      }
      if (j == d1) conic_bug();
      c = m1[j][j];
      Vec row1 = m1[j];
      for (auto& x : row1) x = x / c;
      l2 = linear_form(f.nvars(), vars1, row1);
      if (c * l2 * l2 != q1) conic_bug();
    }
    FieldElem s = sqrt_or_adjoin(-(c / a));
    Poly sl2 = Poly::constant(f.nvars(), s) * l2;
    Poly f1 = l1 - sl2, f2 = l1 + sl2;
    if (Poly::constant(f.nvars(), a) * f1 * f2 != f) conic_bug();
    out.unit = out.unit * a * f1.leading_coefficient() * f2.leading_coefficient();
    out.push(f1.monic(), 1);
    out.push(f2.monic(), 1);
    return;
  }
  // All diagonal entries vanish: hyperbolic pair on the first nonzero cross term.
  std::size_t vi = dim, vj = dim;
  for (std::size_t i = 0; i + 1 < dim && vi == dim; ++i)
    for (std::size_t j = i + 1; j + 1 < dim; ++j)
      if (!m[i][j].is_zero()) {
        vi = i;
        vj = j;
        break;
      }
  if (vi == dim) conic_bug();
  std::size_t xi = vars[vi], xj = vars[vj];
  FieldElem b = FieldElem(2) * m[vi][vj];
  Poly gi = Poly::generator(f.nvars(), xi), gj = Poly::generator(f.nvars(), xj);
  Poly bp = f.partial_derivative(xi) - Poly::constant(f.nvars(), b) * gj;
  Poly cp = f.partial_derivative(xj) - Poly::constant(f.nvars(), b) * gi;
  FieldElem binv = b.inverse();
  Poly f1 = gi + Poly::constant(f.nvars(), binv) * cp;
  Poly f2 = gj + Poly::constant(f.nvars(), binv) * bp;
  if (Poly::constant(f.nvars(), b) * f1 * f2 != f) conic_bug();
  out.unit = out.unit * b * f1.leading_coefficient() * f2.leading_coefficient();
  out.push(f1.monic(), 1);
  out.push(f2.monic(), 1);
}

inline std::vector<FieldElem> univariate_coeffs(const Poly& f, std::size_t v) {
  std::vector<FieldElem> c(std::size_t(f.degree_in(v)) + 1, FieldElem::zero());
  for (const auto& [m, coef] : f.terms()) c[m.exp[v]] = coef;
  return c;
}

// Divisors of |n| by trial division; empty when n is too large to enumerate.
inline std::vector<BigInt> bounded_divisors(BigInt n) {
  if (n < 0) n = -n;
  std::vector<BigInt> divs;
  if (n == 0 || n > BigInt(1000000000000LL)) return divs;
  for (BigInt d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      divs.push_back(d);
      if (d * d != n) divs.push_back(n / d);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

// Rational roots of a univariate polynomial with rational coefficients; the
// degree argument makes this complete for linear factors over any quadratic
// tower when the cubic (or quartic) is irreducible over Q.
inline std::vector<Rational> rational_roots(const std::vector<FieldElem>& coeffs,
                                            bool& enumerable) {
  enumerable = true;
  std::vector<Rational> roots;
  BigInt lc_den(1);
  for (const auto& c : coeffs) {
    if (!c.is_rational()) {
      enumerable = false;
      return roots;
    }
    lc_den = boost::multiprecision::lcm(lc_den, denominator(c.as_rational()));
  }
  std::vector<BigInt> ic(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    Rational q = coeffs[i].as_rational() * Rational(lc_den);
    ic[i] = numerator(q);
  }
  std::size_t lo = 0;
  while (lo < ic.size() && ic[lo] == 0) ++lo;  // factor of x^lo handled by content
  if (lo == ic.size()) return roots;
  std::vector<BigInt> ps = bounded_divisors(ic[lo]);
  std::vector<BigInt> qs = bounded_divisors(ic.back());
  if ((ps.empty() && ic[lo] != 0) || qs.empty()) {
    enumerable = false;
    return roots;
  }
  auto value_at = [&](const Rational& r) {
    Rational acc(0);
    Rational p(1);
    for (std::size_t i = 0; i < ic.size(); ++i) {
      acc += Rational(ic[i]) * p;
      p *= r;
    }
    return acc;
  };
  for (const BigInt& p : ps) {
    for (const BigInt& q : qs) {
      for (int sign = 0; sign < 2; ++sign) {
        Rational cand(sign == 0 ? p : -p, q);
        if (std::find(roots.begin(), roots.end(), cand) != roots.end()) continue;
        if (value_at(cand) == 0) roots.push_back(cand);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

void factor_core(const Poly& f, Factorization& out);

// Univariate degree 3..4: rational linear factors, then quadratics via the
// conic path; biquadratic quartics split through the u = v^2 reduction.
inline void factor_univariate(const Poly& f, std::size_t v, Factorization& out) {
  std::vector<FieldElem> coeffs = univariate_coeffs(f, v);
  std::size_t deg = coeffs.size() - 1;
  bool enumerable = true;
  std::vector<Rational> roots = rational_roots(coeffs, enumerable);
  if (!roots.empty()) {
    Rational r = roots.front();
    Poly lin = Poly::generator(f.nvars(), v) - Poly::constant(f.nvars(), FieldElem(r));
    auto quot = divide_exact(f, lin);
    if (!quot) throw std::logic_error("verified root fails to divide");
    out.push(lin, 1);
    factor_core(*quot, out);
    return;
  }
  if (deg == 3) {
    if (enumerable) {
      // No linear factor over any quadratic tower (degree argument).
      out.unit = out.unit * f.leading_coefficient();
      out.push(f.monic(), 1);
    } else {
      out.complete = false;
      out.unit = out.unit * f.leading_coefficient();
      out.unknown = out.unknown * f.monic();
    }
    return;
  }
  // deg == 4: biquadratic pattern a*v^4 + b*v^2 + c.
  if (coeffs[1].is_zero() && coeffs[3].is_zero()) {
    const FieldElem &a = coeffs[4], &b = coeffs[2], &c = coeffs[0];
    FieldElem disc = b * b - FieldElem(4) * a * c;
    FieldElem s = sqrt_or_adjoin(disc);
    FieldElem half_inv_a = (FieldElem(2) * a).inverse();
    FieldElem u1 = (-b + s) * half_inv_a;
    FieldElem u2 = (-b - s) * half_inv_a;
    Poly v2 = Poly::generator(f.nvars(), v) * Poly::generator(f.nvars(), v);
    out.unit = out.unit * a;
    for (const FieldElem& u : {u1, u2}) {
      Poly quad = v2 - Poly::constant(f.nvars(), u);
      Factorization sub;
      factor_conic(quad, sub);
      out.unit = out.unit * sub.unit;
      for (const auto& [g, mlt] : sub.factors) out.push(g, mlt);
    }
    return;
  }
  out.complete = false;
  out.unit = out.unit * f.leading_coefficient();
  out.unknown = out.unknown * f.monic();
}

inline void factor_core(const Poly& f, Factorization& out) {
  if (f.is_constant()) {
    out.unit = out.unit * f.constant_coefficient();
    return;
  }
  int deg = f.total_degree();
  if (deg == 1) {
    out.unit = out.unit * f.leading_coefficient();
    out.push(f.monic(), 1);
    return;
  }
  if (deg == 2) {
    factor_conic(f, out);
    return;
  }
  std::vector<std::size_t> vars = occurring_vars(f);
  if (vars.size() == 1 && deg <= 4) {
    factor_univariate(f, vars[0], out);
    return;
  }
  out.complete = false;
  out.unit = out.unit * f.leading_coefficient();
  out.unknown = out.unknown * f.monic();
}

}  // namespace detail

/// Bounded factorization into irreducibles over the current tower, adjoining
/// square roots when a quadratic split needs one.  Supported shapes: monomial
/// content always; total degree <= 2 in any number of variables (conic rank
/// analysis); univariate degree <= 4 through rational roots and biquadratic
/// patterns.  Anything else returns with complete == false and the unknown
/// part isolated.
inline Factorization factor_bounded(const Poly& f) {
  if (f.is_zero()) fail(errc::zero_input, "cannot factor the zero polynomial");
  Factorization out;
  out.unknown = Poly::one(f.nvars());
  Poly rest = f;
  // Monomial content.
  for (std::size_t i = 0; i < f.nvars(); ++i) {
    unsigned mn = ~0u;
    for (const auto& [m, c] : rest.terms()) mn = std::min(mn, m.exp[i]);
    if (mn == 0 || mn == ~0u) continue;
    Monomial mono = Monomial::one(f.nvars());
    mono.exp[i] = mn;
    rest = *divide_exact(rest, Poly::term(f.nvars(), mono, FieldElem::one()));
    out.push(Poly::generator(f.nvars(), i), mn);
  }
  detail::factor_core(rest, out);
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& a, const auto& b) { return poly_cmp(a.first, b.first) < 0; });
  // The established identity: f == unit * prod factors^mult * unknown.
  Poly check = Poly::constant(f.nvars(), out.unit);
  for (const auto& [g, mlt] : out.factors) check = check * g.pow(mlt);
  if (!out.complete) check = check * out.unknown;
  if (check != f) throw std::logic_error("factorization product check failed");
  return out;
}

/// Monic univariate gcd by the Euclidean algorithm (single-variable polys).
inline Poly univariate_gcd(Poly a, Poly b) {
  auto reduce_mod = [](Poly f, const Poly& g) {
    // remainder of f by g in one variable
    while (!f.is_zero() && f.total_degree() >= g.total_degree()) {
      Monomial q = f.leading_monomial() / g.leading_monomial();
      FieldElem c = f.leading_coefficient() / g.leading_coefficient();
      f = f - Poly::term(f.nvars(), q, c) * g;
    }
    return f;
  };
  while (!b.is_zero()) {
    Poly r = reduce_mod(a, b);
    a = b;
    b = r;
  }
  return a.is_zero() ? a : a.monic();
}

/// Squarefree part of a univariate polynomial: f / gcd(f, f').
inline Poly squarefree_part(const Poly& f, std::size_t var) {
  if (f.is_zero() || f.is_constant()) return f;
  Poly g = univariate_gcd(f, f.partial_derivative(var));
  if (g.is_constant()) return f.monic();
  return divide_exact(f, g)->monic();
}

}  // namespace pforge

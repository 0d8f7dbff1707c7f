#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "pforge/errors.hpp"

namespace pforge {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational with canonical form maintained by the backend:
/// gcd(|num|, den) = 1, den > 0, zero is 0/1.
using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_string(const Rational& q) { return q.str(); }

inline bool integer_sqrt_exact(const BigInt& n, BigInt& root) {
  if (n < 0) return false;
  root = boost::multiprecision::sqrt(n);
  return root * root == n;
}

/// Exact square root of a rational, when it is one.
inline bool rational_sqrt_exact(const Rational& q, Rational& root) {
  if (q < 0) return false;
  BigInt rn, rd;
  if (!integer_sqrt_exact(numerator(q), rn)) return false;
  if (!integer_sqrt_exact(denominator(q), rd)) return false;
  root = Rational(rn, rd);
  return true;
}

inline Rational parse_rational(const std::string& s) {
  try {
    return Rational(s);
  } catch (const std::exception&) {
    fail(errc::syntax_error, "bad rational literal '" + s + "'");
  }
}

}  // namespace pforge

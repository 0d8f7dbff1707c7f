#pragma once

#include <cctype>
#include <string>
#include <vector>

#include <json.hpp>

#include "pforge/classify.hpp"
#include "pforge/derivation.hpp"
#include "pforge/poisson.hpp"

namespace pforge {

using Json = nlohmann::ordered_json;

// ---- printing ---------------------------------------------------------------

inline std::string monomial_string(const Monomial& m, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < m.exp.size(); ++i) {
    if (!m.exp[i]) continue;
    if (!s.empty()) s += "*";
    s += names[i];
    if (m.exp[i] > 1) s += "^" + std::to_string(m.exp[i]);
  }
  return s;
}

/// Canonical text: graded-lex descending terms, explicit coefficients, the
/// same grammar the parser accepts.
inline std::string poly_string(const Poly& f, const std::vector<std::string>& names) {
  if (f.is_zero()) return "0";
  if (names.size() != f.nvars()) fail(errc::arity_mismatch, "name list arity");
  std::string out;
  for (const auto& [m, c] : f.terms()) {
    // Single-coordinate coefficients carry their sign into the separator;
    // multi-coordinate sums are parenthesized verbatim.
    std::size_t nonzero = 0, idx = 0;
    for (std::size_t i = 0; i < c.coords().size(); ++i)
      if (c.coords()[i] != 0) {
        ++nonzero;
        idx = i;
      }
    bool neg = false;
    std::string coef;
    if (nonzero == 1) {
      Rational r = c.coords()[idx];
      neg = r < 0;
      FieldElem mag = neg ? -c : c;
      coef = to_string(mag);
    } else {
      coef = "(" + to_string(c) + ")";
    }
    std::string mono = monomial_string(m, names);
    std::string body;
    if (mono.empty()) {
      body = coef;
    } else if (coef == "1") {
      body = mono;
    } else {
      body = coef + "*" + mono;
    }
    if (out.empty()) {
      out = neg ? "-" + body : body;
    } else {
      out += neg ? " - " + body : " + " + body;
    }
  }
  return out;
}

// ---- parsing ----------------------------------------------------------------

namespace detail {

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  [[noreturn]] void error(const std::string& msg) const {
    fail(errc::syntax_error, msg + " at position " + std::to_string(pos));
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }
  bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())); }
  bool at_ident() {
    char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  std::string read_uint() {
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (start == pos) error("expected a number");
    return src.substr(start, pos - start);
  }
  Rational read_number() {
    std::string num = read_uint();
    // A '/' directly between integer literals is a rational literal.
    std::size_t save = pos;
    skip_ws();
    if (pos < src.size() && src[pos] == '/') {
      ++pos;
      skip_ws();
      if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
        return Rational(num + "/" + read_uint());
      pos = save;
      error("'/' is only valid inside a rational literal");
    }
    pos = save;
    return Rational(num);
  }
  std::string read_ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    return src.substr(start, pos - start);
  }
};

class PolyParser {
 public:
  PolyParser(const std::string& src, const std::vector<std::string>& names)
      : lex_{src, 0}, names_(names) {}

  Poly parse() {
    Poly p = expr();
    lex_.skip_ws();
    if (lex_.pos != lex_.src.size()) lex_.error("trailing input");
    return p;
  }

 private:
  std::size_t n() const { return names_.size(); }

  Poly expr() {
    bool neg = false;
    if (lex_.accept('-'))
      neg = true;
    else
      lex_.accept('+');
    Poly acc = term();
    if (neg) acc = -acc;
    while (true) {
      if (lex_.accept('+')) {
        acc = acc + term();
      } else if (lex_.accept('-')) {
        acc = acc - term();
      } else {
        break;
      }
    }
    return acc;
  }

  Poly term() {
    Poly acc = factor();
    while (lex_.accept('*')) acc = acc * factor();
    return acc;
  }

  Poly factor() {
    Poly base = atom();
    if (lex_.accept('^')) {
      std::string e = lex_.read_uint();
      unsigned long ev = std::stoul(e);
      if (ev > 64) lex_.error("exponent too large");
      base = base.pow(unsigned(ev));
    }
    return base;
  }

  Poly atom() {
    if (lex_.accept('(')) {
      Poly p = expr();
      lex_.expect(')');
      return p;
    }
    if (lex_.at_digit()) return Poly::constant(n(), FieldElem(lex_.read_number()));
    if (lex_.at_ident()) {
      std::size_t at = lex_.pos;
      std::string id = lex_.read_ident();
      if (id == "sqrt") {
        lex_.expect('(');
        Poly arg = expr();
        lex_.expect(')');
        if (!arg.is_constant()) lex_.error("sqrt of a non-constant expression");
        return Poly::constant(n(), sqrt_or_adjoin(arg.constant_coefficient()));
      }
      for (std::size_t i = 0; i < n(); ++i)
        if (names_[i] == id) return Poly::generator(n(), i);
      lex_.pos = at;
      fail(errc::unknown_generator,
           "unknown generator '" + id + "' at position " + std::to_string(at));
    }
    lex_.error("expected a term");
  }

  Lexer lex_;
  const std::vector<std::string>& names_;
};

}  // namespace detail

/// Parse the shared polynomial grammar: integers, rationals p/q, sqrt(...)
/// constants (adjoining radicands on demand), generators, + - * ^ and
/// parentheses.  Print-parse round trips are the identity.
inline Poly parse_poly(const std::string& src, const std::vector<std::string>& names) {
  return detail::PolyParser(src, names).parse();
}

inline FieldElem parse_field(const std::string& src) {
  return parse_poly(src, {}).constant_coefficient();
}

// ---- structure serialization -------------------------------------------------

inline Json structure_to_json(const PoissonStructure& P) {
  Json j;
  j["schema"] = 1;
  j["generators"] = P.names();
  Json table = Json::array();
  for (const auto& p : P.table()) table.push_back(poly_string(p, P.names()));
  j["table"] = table;
  j["flags"] = {{"jacobi", jacobi_status_name(P.jacobi_status())},
                {"grading", grading_class_name(P.grading_class())}};
  if (P.jacobi_witness()) {
    const auto& w = *P.jacobi_witness();
    j["jacobi_witness"] = {w[0], w[1], w[2]};
  }
  return j;
}

inline PoissonStructure structure_from_json(const Json& j) {
  if (!j.contains("generators") || !j.contains("table"))
    fail(errc::syntax_error, "structure document needs generators and table");
  std::vector<std::string> names = j["generators"].get<std::vector<std::string>>();
  std::vector<Poly> table;
  for (const auto& s : j["table"]) table.push_back(parse_poly(s.get<std::string>(), names));
  PoissonStructure P(names, table);
  if (j.contains("flags") && j["flags"].contains("jacobi")) {
    std::string fs = j["flags"]["jacobi"].get<std::string>();
    std::optional<std::array<std::size_t, 3>> w;
    if (j.contains("jacobi_witness")) {
      auto v = j["jacobi_witness"].get<std::vector<std::size_t>>();
      if (v.size() == 3) w = std::array<std::size_t, 3>{v[0], v[1], v[2]};
    }
    if (fs == "verified") P = P.with_jacobi(JacobiStatus::verified, w);
    if (fs == "failed") P = P.with_jacobi(JacobiStatus::failed, w);
  }
  return P;
}

inline Json derivation_to_json(const PolyDerivation& d, const std::vector<std::string>& names) {
  Json j;
  j["schema"] = 1;
  Json imgs = Json::array();
  for (const auto& p : d.images()) imgs.push_back(poly_string(p, names));
  j["images"] = imgs;
  Json flags;
  flags["poisson"] = d.flags().poisson;
  flags["alpha_compatible"] = d.flags().alpha_compatible;
  if (d.flags().lnd_within)
    flags["lnd_within"] = *d.flags().lnd_within;
  else
    flags["lnd_within"] = nullptr;
  j["flags"] = flags;
  return j;
}

inline PolyDerivation derivation_from_json(const Json& j, const std::vector<std::string>& names) {
  std::vector<Poly> images;
  for (const auto& s : j["images"]) images.push_back(parse_poly(s.get<std::string>(), names));
  PolyDerivation d(images);
  if (j.contains("flags")) {
    PolyDerivation::Flags f;
    const auto& jf = j["flags"];
    f.poisson = jf.value("poisson", false);
    f.alpha_compatible = jf.value("alpha_compatible", false);
    if (jf.contains("lnd_within") && !jf["lnd_within"].is_null())
      f.lnd_within = jf["lnd_within"].get<unsigned>();
    d = d.with_flags(f);
  }
  return d;
}

inline Json substitution_to_json(const Substitution& s, const std::vector<std::string>& names) {
  Json j;
  j["kind"] = subst_kind_name(s.kind());
  Json imgs = Json::array(), invs = Json::array();
  for (const auto& p : s.images()) imgs.push_back(poly_string(p, names));
  for (const auto& p : s.inverse_images()) invs.push_back(poly_string(p, names));
  j["images"] = imgs;
  j["inverse_images"] = invs;
  return j;
}

/// Radicand chain of a tower, innermost first, in the shared grammar.
inline Json tower_to_json(const TowerPtr& t) {
  Json arr = Json::array();
  for (std::size_t level = 0; level < t->height(); ++level)
    arr.push_back(radicand_string(t, level));
  return arr;
}

inline Json fingerprint_to_json(const InvariantFingerprint& fp,
                                const std::vector<std::string>& names) {
  Json j;
  Json center = Json::array();
  for (const auto& p : fp.center_basis_deg4) center.push_back(poly_string(p, names));
  j["center_basis_deg4"] = center;
  Json comm = Json::array();
  for (const auto& p : fp.commutator_ideal.gens) comm.push_back(poly_string(p, names));
  j["commutator_ideal"] = comm;
  Json primes = Json::array();
  for (const auto& p : fp.principal_primes_deg2) primes.push_back(poly_string(p, names));
  j["principal_primes_deg2"] = primes;
  return j;
}

inline Json certificate_to_json(const ClassificationCertificate& cert,
                                const std::vector<std::string>& names) {
  Json j;
  j["label"] = family_name(cert.label.family);
  if (cert.label.lambda)
    j["lambda"] = to_string(*cert.label.lambda);
  else
    j["lambda"] = nullptr;
  j["substitution"] = substitution_to_json(cert.subst, names);
  j["adjoined_radicands"] = tower_to_json(cert.tower);
  return j;
}

}  // namespace pforge

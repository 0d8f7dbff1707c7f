// poissonforge: exact computations with Poisson structures on polynomial
// rings.  One subcommand per library capability; deterministic text and JSON
// output.  Verdicts (jacobi failed, NotOre, inconclusive nilpotence) are
// successful executions; malformed input or unsupported computation exits 2
// with a machine-readable error document.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <sstream>

#include "pforge/pforge.hpp"

using namespace pforge;

namespace {

unsigned default_degree_cap() {
  if (const char* e = std::getenv("POISSON_FORGE_DEGREE_CAP")) {
    int v = std::atoi(e);
    if (v >= 1) return unsigned(v);
  }
  return 8;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::invalid_argument, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_json(const std::string& path) {
  try {
    return Json::parse(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    fail(errc::syntax_error, "bad JSON in '" + path + "': " + e.what());
  }
}

PoissonStructure load_structure(const std::string& path) {
  return structure_from_json(load_json(path));
}

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct Output {
  std::string format = "text";
  Json json;
  std::ostringstream text;

  void flush() {
    if (format == "json") {
      json["schema"] = 1;
      // re-emit with schema first
      Json ordered;
      ordered["schema"] = 1;
      for (auto& [k, v] : json.items())
        if (k != "schema") ordered[k] = v;
      std::cout << ordered.dump(2) << "\n";
    } else {
      std::cout << text.str();
    }
  }
};

void emit_poly_list(Output& out, const std::string& key, const std::vector<Poly>& polys,
                    const std::vector<std::string>& names) {
  Json arr = Json::array();
  out.text << key << ":";
  if (polys.empty()) out.text << " (none)";
  out.text << "\n";
  for (const auto& p : polys) {
    std::string s = poly_string(p, names);
    arr.push_back(s);
    out.text << "  " << s << "\n";
  }
  out.json[key] = arr;
}

void emit_classification(Output& out, const Poly& f, const std::vector<std::string>& names,
                         const ClassificationCertificate& cert,
                         const InvariantFingerprint& fp) {
  Json j;
  j["input"] = poly_string(f, names);
  j["label"] = family_name(cert.label.family);
  if (cert.label.lambda)
    j["lambda"] = to_string(*cert.label.lambda);
  else
    j["lambda"] = nullptr;
  j["certificate"] = certificate_to_json(cert, names);
  j["fingerprint"] = fingerprint_to_json(fp, names);
  out.json["classification"].push_back(j);

  out.text << "input: " << poly_string(f, names) << "\n";
  out.text << "label: " << family_name(cert.label.family) << "\n";
  if (cert.label.lambda) out.text << "lambda: " << to_string(*cert.label.lambda) << "\n";
  out.text << "substitution (" << subst_kind_name(cert.subst.kind()) << "):\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    out.text << "  " << names[i] << " -> " << poly_string(cert.subst.images()[i], names) << "\n";
  out.text << "inverse:\n";
  for (std::size_t i = 0; i < names.size(); ++i)
    out.text << "  " << names[i] << " -> " << poly_string(cert.subst.inverse_images()[i], names)
             << "\n";
  out.text << "adjoined radicands:";
  if (cert.tower->height() == 0) out.text << " (none)";
  out.text << "\n";
  for (std::size_t l = 0; l < cert.tower->height(); ++l)
    out.text << "  sqrt(" << radicand_string(cert.tower, l) << ")\n";
  out.text << "fingerprint:\n";
  auto line = [&](const char* key, const std::vector<Poly>& ps) {
    out.text << "  " << key << ":";
    for (const auto& p : ps) out.text << " " << poly_string(p, names) << ";";
    out.text << "\n";
  };
  line("center_deg4", fp.center_basis_deg4);
  line("commutator_ideal", fp.commutator_ideal.gens);
  line("principal_primes_deg2", fp.principal_primes_deg2);
}

PolyDerivation derivation_from_images(const std::vector<std::string>& images,
                                      const std::vector<std::string>& names) {
  std::vector<Poly> ps;
  for (const auto& s : images) ps.push_back(parse_poly(s, names));
  return PolyDerivation(ps);
}

TdegDescriptor tdeg_from_json(const Json& j) {
  std::string kind = j.value("kind", "polynomial");
  if (kind == "polynomial") return TdegDescriptor::polynomial(j.value("n", 0u));
  if (kind == "laurent") return TdegDescriptor::laurent(j.value("n", 0u));
  if (kind == "ore_tower")
    return TdegDescriptor::ore_tower(tdeg_from_json(j.at("base")), j.value("steps", 0u));
  fail(errc::syntax_error, "unknown tdeg descriptor kind '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact Poisson-structure computations on polynomial rings"};
  app.require_subcommand(1);

  std::string format = "text";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
  unsigned jobs = 1;
  app.add_option("--jobs", jobs, "parallel batch workers (classify2/classify3)");

  std::string structure_path, gens_csv, bracket_expr, central_name;
  unsigned deg = 0;

  // bracket
  auto* cmd_bracket = app.add_subcommand("bracket", "evaluate {f, g}");
  std::vector<std::string> bracket_args;
  cmd_bracket->add_option("--structure", structure_path, "structure file")->required();
  cmd_bracket->add_option("exprs", bracket_args, "two polynomial expressions")->expected(2);

  // jacobi
  auto* cmd_jacobi = app.add_subcommand("jacobi", "verify the Jacobi identity");
  cmd_jacobi->add_option("--structure", structure_path)->required();

  // center
  auto* cmd_center = app.add_subcommand("center", "Poisson center basis up to a degree");
  cmd_center->add_option("--structure", structure_path)->required();
  unsigned center_deg = 4;
  cmd_center->add_option("--deg", center_deg, "degree bound");

  // ideal
  auto* cmd_ideal = app.add_subcommand("ideal", "is the ideal a Poisson ideal?");
  std::vector<std::string> ideal_gens;
  cmd_ideal->add_option("--structure", structure_path)->required();
  cmd_ideal->add_option("gens", ideal_gens, "ideal generators")->required();

  // primes
  auto* cmd_primes = app.add_subcommand("primes", "principal Poisson primes from table divisors");
  cmd_primes->add_option("--structure", structure_path)->required();
  unsigned primes_deg = 2;
  cmd_primes->add_option("--deg", primes_deg, "divisor degree bound");

  // classify2 / classify3
  auto* cmd_c2 = app.add_subcommand("classify2", "filtered quadratic normal form on k[x,y]");
  std::vector<std::string> c2_brackets;
  cmd_c2->add_option("--bracket", c2_brackets, "bracket polynomial {x,y}")->required();
  std::string c2_gens = "x,y";
  cmd_c2->add_option("--gens", c2_gens, "generator names");

  auto* cmd_c3 = app.add_subcommand("classify3", "graded quadratic normal form on k[x,y,t]");
  std::vector<std::string> c3_brackets;
  cmd_c3->add_option("--bracket", c3_brackets, "bracket polynomial {x,y}")->required();
  std::string c3_gens = "x,y,t";
  cmd_c3->add_option("--gens", c3_gens, "generator names (t last, Poisson central)");

  // fingerprint
  auto* cmd_fp = app.add_subcommand("fingerprint", "center/commutator/primes invariants");
  cmd_fp->add_option("--structure", structure_path)->required();

  // ore
  auto* cmd_ore = app.add_subcommand("ore", "Poisson-Ore extensions");
  auto* cmd_ore_build = cmd_ore->add_subcommand("build", "build an iterated extension");
  std::string base_path, steps_path;
  cmd_ore_build->add_option("--base", base_path, "base structure file")->required();
  cmd_ore_build->add_option("--steps", steps_path, "step list file")->required();
  auto* cmd_ore_rec = cmd_ore->add_subcommand("recognize", "recognize A[t; alpha, delta]_P");
  cmd_ore_rec->add_option("--structure", structure_path)->required();
  cmd_ore_rec->add_option("--t", central_name, "the adjoined generator's name")->required();
  cmd_ore->require_subcommand(1);

  // catalog
  auto* cmd_catalog = app.add_subcommand("catalog", "named families");
  std::string cat_name;
  std::vector<std::string> cat_params;
  cmd_catalog->add_option("name", cat_name, "weyl|skew|heisenberg|sl2|lpluscenter|family4|family5")
      ->required();
  cmd_catalog->add_option("params", cat_params, "family parameters");
  std::string skew_matrix;
  cmd_catalog->add_option("--matrix", skew_matrix, "skew entries, rows ';'-separated");

  // derivations
  auto* cmd_der = app.add_subcommand("derivations", "basis of Poisson derivations");
  cmd_der->add_option("--structure", structure_path)->required();
  cmd_der->add_option("--deg", deg, "image degree cap");

  // pml
  auto* cmd_pml = app.add_subcommand("pml", "Makar-Limanov over-approximation within caps");
  cmd_pml->add_option("--structure", structure_path)->required();
  unsigned pml_dcap = 1, pml_nbound = 6, pml_kcap = 2;
  std::string pml_constraint;
  cmd_pml->add_option("--deriv-deg", pml_dcap, "derivation image degree cap");
  cmd_pml->add_option("--nilpotence-bound", pml_nbound, "iteration bound");
  cmd_pml->add_option("--deg", pml_kcap, "kernel degree cap");
  cmd_pml->add_option("--constraint", pml_constraint, "central element the derivations must kill");

  // divisor
  auto* cmd_div = app.add_subcommand("divisor", "F-divisor Poisson subalgebra generators");
  std::vector<std::string> div_f;
  std::string div_units = "constants";
  unsigned div_iter = 0, div_deg = 0;
  cmd_div->add_option("--structure", structure_path)->required();
  cmd_div->add_option("--f", div_f, "elements of F")->required();
  cmd_div->add_option("--units", div_units, "constants | all | comma list of unit generators");
  cmd_div->add_option("--iter-cap", div_iter, "iteration cap");
  cmd_div->add_option("--deg-cap", div_deg, "degree cap");

  // stratiform
  auto* cmd_strat = app.add_subcommand("stratiform", "stratiform chain length / Tdeg arithmetic");
  std::string chain_path, tdeg_path;
  cmd_strat->add_option("--chain", chain_path, "chain descriptor file");
  cmd_strat->add_option("--tdeg", tdeg_path, "Tdeg descriptor file");

  // discriminant
  auto* cmd_disc = app.add_subcommand("discriminant", "trivial-fiber discriminant");
  cmd_disc->add_option("--structure", structure_path)->required();
  cmd_disc->add_option("--central", central_name, "central generator name")->required();

  // Parent-level flags (--format, --jobs) may appear anywhere.
  std::function<void(CLI::App*)> set_fallthrough = [&](CLI::App* a) {
    a->fallthrough();
    for (auto* s : a->get_subcommands([](const CLI::App*) { return true; }))
      set_fallthrough(s);
  };
  set_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors exit 1
  }

  Output out;
  out.format = format;
  unsigned cap = default_degree_cap();

  try {
    if (*cmd_bracket) {
      PoissonStructure P = load_structure(structure_path);
      Poly f = parse_poly(bracket_args[0], P.names());
      Poly g = parse_poly(bracket_args[1], P.names());
      Poly b = bracket(P, f, g);
      out.json["bracket"] = poly_string(b, P.names());
      out.text << poly_string(b, P.names()) << "\n";
    } else if (*cmd_jacobi) {
      PoissonStructure P = verify_jacobi(load_structure(structure_path));
      out.json["jacobi"] = jacobi_status_name(P.jacobi_status());
      out.text << jacobi_status_name(P.jacobi_status());
      if (P.jacobi_witness()) {
        const auto& w = *P.jacobi_witness();
        Json names = Json::array();
        for (auto i : {w[0], w[1], w[2]}) names.push_back(P.names()[i]);
        out.json["witness"] = names;
        out.text << " (" << P.names()[w[0]] << ", " << P.names()[w[1]] << ", " << P.names()[w[2]]
                 << ")";
      }
      out.text << "\n";
    } else if (*cmd_center) {
      PoissonStructure P = load_structure(structure_path);
      emit_poly_list(out, "center_basis", center_up_to_degree(P, center_deg), P.names());
    } else if (*cmd_ideal) {
      PoissonStructure P = load_structure(structure_path);
      std::vector<Poly> gens;
      for (const auto& s : ideal_gens) gens.push_back(parse_poly(s, P.names()));
      bool ok = is_poisson_ideal(P, gens);
      out.json["poisson_ideal"] = ok;
      out.text << (ok ? "true" : "false") << "\n";
    } else if (*cmd_primes) {
      PoissonStructure P = load_structure(structure_path);
      emit_poly_list(out, "principal_poisson_primes", principal_poisson_primes(P, primes_deg),
                     P.names());
    } else if (*cmd_c2 || *cmd_c3) {
      bool three = bool(*cmd_c3);
      std::vector<std::string> names = split_names(three ? c3_gens : c2_gens);
      if (names.size() != (three ? 3u : 2u))
        fail(errc::arity_mismatch, three ? "classify3 needs three generators"
                                         : "classify2 needs two generators");
      const auto& inputs = three ? c3_brackets : c2_brackets;
      out.json["classification"] = Json::array();
      auto run_one = [&](const std::string& src) {
        Output one;
        one.format = format;
        one.json["classification"] = Json::array();
        Poly f = parse_poly(src, names);
        ClassificationCertificate cert = three ? classify_3var_graded(f) : classify_2var(f);
        PoissonStructure in = three ? bivector_structure_3(f) : bivector_structure_2(f);
        InvariantFingerprint fp = fingerprint(in, cap);
        emit_classification(one, f, names, cert, fp);
        return one;
      };
      std::vector<Output> results(inputs.size());
      if (jobs > 1 && inputs.size() > 1) {
        std::vector<std::future<Output>> futs;
        for (const auto& src : inputs)
          futs.push_back(std::async(std::launch::async, run_one, src));
        for (std::size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
      } else {
        for (std::size_t i = 0; i < inputs.size(); ++i) results[i] = run_one(inputs[i]);
      }
      for (auto& r : results) {
        for (auto& item : r.json["classification"]) out.json["classification"].push_back(item);
        out.text << r.text.str();
      }
    } else if (*cmd_fp) {
      PoissonStructure P = load_structure(structure_path);
      InvariantFingerprint fp = fingerprint(P, cap);
      out.json["fingerprint"] = fingerprint_to_json(fp, P.names());
      emit_poly_list(out, "center_basis_deg4", fp.center_basis_deg4, P.names());
      emit_poly_list(out, "commutator_ideal", fp.commutator_ideal.gens, P.names());
      emit_poly_list(out, "principal_primes_deg2", fp.principal_primes_deg2, P.names());
    } else if (*cmd_ore_build) {
      PoissonStructure base = load_structure(base_path);
      Json steps = load_json(steps_path);
      PoissonStructure cur = base;
      for (const auto& js : steps.at("steps")) {
        std::string label = js.at("label").get<std::string>();
        auto alpha = derivation_from_images(js.at("alpha").get<std::vector<std::string>>(),
                                            cur.names());
        auto delta = derivation_from_images(js.at("delta").get<std::vector<std::string>>(),
                                            cur.names());
        cur = extend(cur, alpha, delta, label);
      }
      Json j = structure_to_json(cur);
      out.json["structure"] = j;
      out.text << j.dump(2) << "\n";
    } else if (*cmd_ore_rec) {
      PoissonStructure P = load_structure(structure_path);
      std::size_t t = P.generator_index(central_name);
      RecognizeResult r = recognize(P, t);
      if (std::holds_alternative<OreForm>(r)) {
        const auto& oreform = std::get<OreForm>(r);
        out.json["ore"] = true;
        out.json["base"] = structure_to_json(oreform.base);
        out.json["alpha"] = derivation_to_json(oreform.alpha, oreform.base.names());
        out.json["delta"] = derivation_to_json(oreform.delta, oreform.base.names());
        out.text << "Ore at " << central_name << "\n";
        for (std::size_t i = 0; i < oreform.base.nvars(); ++i) {
          out.text << "  alpha(" << oreform.base.names()[i]
                   << ") = " << poly_string(oreform.alpha.images()[i], oreform.base.names())
                   << ", delta(" << oreform.base.names()[i]
                   << ") = " << poly_string(oreform.delta.images()[i], oreform.base.names())
                   << "\n";
        }
      } else {
        auto w = std::get<NotOre>(r).witness;
        out.json["ore"] = false;
        out.json["witness"] = {P.names()[w.first], P.names()[w.second]};
        out.text << "NotOre (" << P.names()[w.first] << ", " << P.names()[w.second] << ")\n";
      }
    } else if (*cmd_catalog) {
      PoissonStructure P = weyl(1);
      if (cat_name == "weyl") {
        if (cat_params.empty()) fail(errc::invalid_argument, "weyl needs n");
        P = weyl(unsigned(std::stoul(cat_params[0])));
      } else if (cat_name == "heisenberg") {
        P = bianchi(BianchiFamily::heisenberg);
      } else if (cat_name == "sl2") {
        P = bianchi(BianchiFamily::sl2);
      } else if (cat_name == "lpluscenter") {
        P = bianchi(BianchiFamily::l_plus_center);
      } else if (cat_name == "family4" || cat_name == "family5") {
        if (cat_params.empty()) fail(errc::zero_parameter, cat_name + " needs a parameter");
        FieldElem p = parse_field(cat_params[0]);
        P = bianchi(cat_name == "family4" ? BianchiFamily::family4 : BianchiFamily::family5, p);
      } else if (cat_name == "skew") {
        if (skew_matrix.empty()) fail(errc::invalid_argument, "skew needs --matrix");
        Mat m;
        std::istringstream rows(skew_matrix);
        std::string row;
        while (std::getline(rows, row, ';')) {
          Vec r;
          std::istringstream cells(row);
          std::string cell;
          while (std::getline(cells, cell, ',')) r.push_back(parse_field(cell));
          m.push_back(r);
        }
        P = skew_symmetric(m);
      } else {
        fail(errc::invalid_argument, "unknown catalog family '" + cat_name + "'");
      }
      Json j = structure_to_json(P);
      out.json["structure"] = j;
      out.text << j.dump(2) << "\n";
    } else if (*cmd_der) {
      PoissonStructure P = load_structure(structure_path);
      auto basis = solve_poisson_derivations(P, deg);
      out.json["derivations"] = Json::array();
      out.text << "poisson derivation basis (" << basis.size() << "):\n";
      for (const auto& d : basis) {
        out.json["derivations"].push_back(derivation_to_json(d, P.names()));
        out.text << " ";
        for (std::size_t i = 0; i < P.nvars(); ++i)
          out.text << " " << P.names()[i] << " -> " << poly_string(d.images()[i], P.names()) << ";";
        out.text << "\n";
      }
    } else if (*cmd_pml) {
      PoissonStructure P = load_structure(structure_path);
      std::optional<Poly> constraint;
      if (!pml_constraint.empty()) constraint = parse_poly(pml_constraint, P.names());
      PmlResult r = pml_over_approximation(P, pml_dcap, pml_nbound, pml_kcap, constraint);
      out.json["caps"] = {{"derivation_degree", r.derivation_degree_cap},
                          {"nilpotence_bound", r.nilpotence_bound},
                          {"kernel_degree", r.kernel_degree_cap}};
      out.json["rigid_within_bounds"] = r.rigid_within_bounds;
      out.json["certified_lnd_count"] = r.certified.size();
      out.text << "over-approximation of the Makar-Limanov invariant within caps (deriv deg "
               << r.derivation_degree_cap << ", nilpotence " << r.nilpotence_bound
               << ", kernel deg " << r.kernel_degree_cap << ")\n";
      if (r.rigid_within_bounds) out.text << "rigid within bounds (no certified LND found)\n";
      emit_poly_list(out, "basis", r.basis, P.names());
    } else if (*cmd_div) {
      PoissonStructure P = load_structure(structure_path);
      std::vector<Poly> F;
      for (const auto& s : div_f) F.push_back(parse_poly(s, P.names()));
      UnitGroupSpec units = UnitGroupSpec::constants();
      if (div_units == "all") {
        units = UnitGroupSpec::monomial_all(P.nvars());
      } else if (div_units != "constants") {
        std::vector<std::size_t> idx;
        for (const auto& nm : split_names(div_units)) idx.push_back(P.generator_index(nm));
        units = UnitGroupSpec::monomial(idx);
      }
      DivisorSubalgebra d = divisor_subalgebra(P, F, units, div_iter ? div_iter : cap,
                                               div_deg ? div_deg : cap);
      out.json["status"] = d.status == DivisorStatus::stable ? "stable" : "capped";
      out.text << (d.status == DivisorStatus::stable ? "stable" : "capped") << "\n";
      emit_poly_list(out, "generators", d.generators, P.names());
    } else if (*cmd_strat) {
      if (!chain_path.empty()) {
        Json j = load_json(chain_path);
        StratiformChain chain;
        for (const auto& js : j.at("steps")) {
          std::string kind = js.at("kind").get<std::string>();
          if (kind == "finite")
            chain.steps.push_back(StratStep::finite_over);
          else if (kind == "ore")
            chain.steps.push_back(StratStep::ore_transcendental);
          else
            fail(errc::syntax_error, "unknown step kind '" + kind + "'");
        }
        unsigned len = stratiform_length(chain);
        out.json["stratiform_length"] = len;
        out.json["note"] = "chain steps are declared markers; genuineness is the caller's responsibility";
        out.text << "stratiform length: " << len << "\n";
      } else if (!tdeg_path.empty()) {
        unsigned td = tdeg_catalog(tdeg_from_json(load_json(tdeg_path)));
        out.json["tdeg"] = td;
        out.text << "tdeg: " << td << "\n";
      } else {
        fail(errc::invalid_argument, "stratiform needs --chain or --tdeg");
      }
    } else if (*cmd_disc) {
      PoissonStructure P = load_structure(structure_path);
      std::size_t t = P.generator_index(central_name);
      Poly d = trivial_fiber_discriminant(P, t);
      std::string s = poly_string(d, {central_name});
      out.json["discriminant"] = s;
      out.text << s << "\n";
    }
  } catch (const domain_error& e) {
    Json err;
    err["schema"] = 1;
    err["error"] = {{"kind", errc_name(e.kind())}, {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    Json err;
    err["schema"] = 1;
    err["error"] = {{"kind", "Internal"}, {"message", e.what()}};
    std::cout << err.dump(2) << "\n";
    return 2;
  }
  out.flush();
  return 0;
}

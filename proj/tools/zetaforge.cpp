// zetaforge: local normal zeta functions of class-2 nilpotent groups from a
// commutator-matrix presentation, with flag-variety combinatorics, finite
// field hypersurface checks, and a brute-force lattice oracle.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zetaforge/compare.hpp"
#include "zetaforge/flags.hpp"
#include "zetaforge/zeta.hpp"

using namespace zetaforge;
using nlohmann::json;

namespace {

std::vector<int> parse_subset(const std::string& text) {
  std::string body = text;
  if (body.rfind("I=", 0) == 0) body = body.substr(2);
  std::vector<int> out;
  if (body.empty()) return out;
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t comma = body.find(',', pos);
    std::string tok = body.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty()) throw CLI::ValidationError("empty entry in subset list");
    out.push_back(std::stoi(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

json int_to_json(const Int& v) {
  if (v >= std::numeric_limits<long long>::min() &&
      v <= std::numeric_limits<long long>::max() &&
      boost::multiprecision::abs(v) < Int(1ll << 53))
    return static_cast<long long>(v);
  return v.str();  // too large for a double-faithful JSON number
}

json ints_to_json(const std::vector<Int>& vs) {
  json arr = json::array();
  for (const Int& v : vs) arr.push_back(int_to_json(v));
  return arr;
}

json report_to_json(const HypothesisReport& rep) {
  json j;
  j["prime"] = rep.prime;
  j["pf_nonzero"] = rep.pf_nonzero;
  j["irreducible_over_Q"] = rep.irreducible_over_Q;
  j["smooth_mod_p"] =
      rep.smooth_mod_p ? json(*rep.smooth_mod_p) : json("unchecked");
  j["smooth_vacuous"] = rep.smooth_vacuous;
  j["line_free_mod_p"] =
      rep.line_free_mod_p ? json(*rep.line_free_mod_p) : json("unchecked");
  j["lines_vacuous"] = rep.lines_vacuous;
  j["n_points"] = rep.n_points ? json(*rep.n_points) : json("unchecked");
  j["degree_preserved_mod_p"] = rep.degree_preserved_mod_p;
  j["good_reduction"] =
      rep.good_reduction ? json(*rep.good_reduction) : json("unchecked");
  j["notes"] = rep.notes;
  return j;
}

json report_to_json(const FuneqReport& rep) {
  json j;
  j["holds"] = rep.holds;
  j["conditional"] = rep.conditional;
  j["sign"] = rep.sign;
  j["p_exponent"] = rep.p_exponent;
  j["t_exponent"] = rep.t_exponent;
  if (rep.w0_symmetry) j["w0_symmetry"] = *rep.w0_symmetry;
  if (rep.w1_symmetry) j["w1_symmetry"] = *rep.w1_symmetry;
  if (rep.a_symmetry) j["a_symmetry"] = *rep.a_symmetry;
  if (rep.weil_rule_ok) j["weil_rule_ok"] = *rep.weil_rule_ok;
  return j;
}

json report_to_json(const CompareReport& rep) {
  json j;
  j["prime"] = rep.prime;
  j["N"] = rep.terms;
  j["coefficients"] = ints_to_json(rep.oracle);
  j["closed_form_coefficients"] = rep.closed_form_available
                                      ? ints_to_json(rep.closed_form)
                                      : json(nullptr);
  j["lattice_sum_coefficients"] = ints_to_json(rep.lattice_route);
  j["agree"] = rep.agree;
  j["first_divergence"] =
      rep.first_divergence ? json(*rep.first_divergence) : json(nullptr);
  j["n_points"] = rep.n_points_used;
  j["hypothesis"] = report_to_json(rep.hypothesis);
  j["expected_at_bad_prime"] = rep.expected_at_bad_prime;
  return j;
}

std::string dump(const json& j) { return j.dump(2); }

struct CommonOpts {
  std::string file;
  std::string poly;
  std::string type_text;
  std::string r_text;
  std::string n_poly;
  long long prime = 0;
  int n = 0;
  int terms = 5;
  int k = 0;
  int dim = 0;
  int a = 0;
  long b = 0;
  bool check_funeq = false;
  bool assert_irreducible = false;
  long long budget_flag = -1;
  int threads = 1;  // accepted as a hint only

  std::optional<long long> budget() const {
    return budget_flag >= 0 ? std::optional<long long>(budget_flag)
                            : std::nullopt;
  }
};

PointCount point_count_from_flag(const std::string& text) {
  if (text.empty()) return PointCount::symbolic();
  MPoly f = MPoly::parse(text);
  return f.is_zero() ? PointCount::zero() : PointCount::polynomial(f);
}

MPoly hypersurface_from(const CommonOpts& opt) {
  if (!opt.file.empty() && !opt.poly.empty())
    throw CLI::ValidationError("give either --file or --poly, not both");
  if (!opt.file.empty()) return pfaffian(load_presentation(opt.file));
  if (!opt.poly.empty()) return MPoly::parse(opt.poly);
  throw CLI::ValidationError("a hypersurface needs --file or --poly");
}

int run(int argc, char** argv) {
  CLI::App app{"exact local normal zeta functions of class-2 groups"};
  app.require_subcommand(1);
  CommonOpts opt;
  app.add_option("--threads", opt.threads,
                 "worker hint; computations are deterministic");

  auto add_budget = [&](CLI::App* cmd) {
    cmd->add_option("--budget", opt.budget_flag,
                    "enumeration budget override (default: ZETAFORGE_BUDGET "
                    "or 10^7)");
  };

  // ---- flags ----
  auto* flags_cmd = app.add_subcommand("flags", "flag variety combinatorics");
  flags_cmd->require_subcommand(1);
  auto* flags_fn = flags_cmd->add_subcommand("fn", "flag rational function F_n");
  flags_fn->add_option("--n", opt.n, "ambient rank")->required();
  flags_fn->add_flag("--check-funeq", opt.check_funeq,
                     "verify the functional equation symbolically");
  auto* flags_schubert =
      flags_cmd->add_subcommand("schubert", "Schubert polynomial c_I(q)");
  flags_schubert->add_option("--n", opt.n, "ambient rank")->required();
  flags_schubert->add_option("--type", opt.type_text,
                             "subset, e.g. I=1,3")->required();
  auto* flags_count =
      flags_cmd->add_subcommand("count", "flag variety point count b_I(q)");
  flags_count->add_option("--n", opt.n, "ambient rank")->required();
  flags_count->add_option("--type", opt.type_text, "subset, e.g. I=1,3")
      ->required();

  // ---- group ----
  auto* group_cmd = app.add_subcommand("group", "presentation checks");
  group_cmd->require_subcommand(1);
  auto* group_check = group_cmd->add_subcommand("check", "hypothesis report");
  group_check->add_option("--file", opt.file, "presentation file")->required();
  group_check->add_option("--prime", opt.prime, "prime to check at")
      ->required();
  group_check->add_flag("--assert-irreducible", opt.assert_irreducible,
                        "record the irreducibility assertion");
  add_budget(group_check);
  auto* group_pf = group_cmd->add_subcommand("pfaffian", "Pfaffian polynomial");
  group_pf->add_option("--file", opt.file, "presentation file")->required();

  // ---- zeta ----
  auto* zeta_cmd = app.add_subcommand("zeta", "closed-form zeta functions");
  zeta_cmd->require_subcommand(1);
  auto* zeta_compute = zeta_cmd->add_subcommand(
      "compute", "closed form for a presentation (smooth line-free route)");
  zeta_compute->add_option("--file", opt.file, "presentation file")
      ->required();
  zeta_compute->add_option(
      "--n-poly", opt.n_poly,
      "point count of the Pfaffian as a polynomial in p (omit for symbolic)");
  zeta_compute->add_option("--prime", opt.prime, "prime for a series check");
  zeta_compute->add_option("--terms", opt.terms, "series truncation order");
  zeta_compute->add_flag("--assert-irreducible", opt.assert_irreducible,
                         "acknowledge the irreducibility hypothesis");
  auto* zeta_grenham =
      zeta_cmd->add_subcommand("grenham", "closed form for the Grenham group");
  zeta_grenham->add_option("--n", opt.n, "number of generators")->required();
  zeta_grenham->add_option("--prime", opt.prime, "prime for a series print");
  zeta_grenham->add_option("--terms", opt.terms, "series truncation order");
  auto* zeta_funeq =
      zeta_cmd->add_subcommand("funeq", "functional equation report");
  zeta_funeq->add_option("--file", opt.file, "presentation file");
  zeta_funeq->add_option("--n-poly", opt.n_poly,
                         "point count polynomial in p (omit for symbolic)");
  zeta_funeq->add_option("--grenham", opt.n, "Grenham rank instead of a file");
  zeta_funeq->add_flag("--assert-irreducible", opt.assert_irreducible);
  auto* zeta_shift = zeta_cmd->add_subcommand(
      "shift", "local factor zeta_p(a s - b) = 1/(1 - p^b t^a)");
  zeta_shift->add_option("--a", opt.a, "coefficient of s")->required();
  zeta_shift->add_option("--b", opt.b, "constant shift")->required();

  // ---- geom ----
  auto* geom_cmd =
      app.add_subcommand("geom", "projective geometry over prime fields");
  geom_cmd->require_subcommand(1);
  auto add_hyp = [&](CLI::App* cmd) {
    cmd->add_option("--file", opt.file, "presentation file (uses its Pfaffian)");
    cmd->add_option("--poly", opt.poly, "homogeneous polynomial, e.g. y_1^2 + y_2^2");
    cmd->add_option("--prime", opt.prime, "prime field")->required();
    add_budget(cmd);
  };
  auto* geom_points =
      geom_cmd->add_subcommand("points", "rational point count");
  add_hyp(geom_points);
  auto* geom_smooth = geom_cmd->add_subcommand("smooth", "Jacobian smoothness");
  add_hyp(geom_smooth);
  auto* geom_lines = geom_cmd->add_subcommand("lines", "search for a line");
  add_hyp(geom_lines);
  auto* geom_fano =
      geom_cmd->add_subcommand("fano", "count of k-planes on the hypersurface");
  add_hyp(geom_fano);
  geom_fano->add_option("--k", opt.k, "plane dimension")->required();
  auto* geom_iso = geom_cmd->add_subcommand(
      "isotropic", "common isotropic subspace of a pencil of skew forms");
  geom_iso->add_option("--file", opt.file,
                       "pencil file {p, phi, psi, dim}")->required();
  geom_iso->add_option("--dim", opt.dim, "target dimension override");
  add_budget(geom_iso);

  // ---- oracle ----
  auto* oracle_cmd =
      app.add_subcommand("oracle", "brute-force lattice enumeration");
  oracle_cmd->require_subcommand(1);
  auto* oracle_count =
      oracle_cmd->add_subcommand("count", "ideal counts by index");
  oracle_count->add_option("--file", opt.file, "presentation file")
      ->required();
  oracle_count->add_option("--prime", opt.prime, "prime")->required();
  oracle_count->add_option("--terms", opt.terms, "largest index exponent");
  add_budget(oracle_count);
  auto* oracle_compare = oracle_cmd->add_subcommand(
      "compare", "three-way comparison of oracle and closed forms");
  oracle_compare->add_option("--file", opt.file, "presentation file")
      ->required();
  oracle_compare->add_option("--prime", opt.prime, "prime")->required();
  oracle_compare->add_option("--terms", opt.terms, "largest index exponent");
  oracle_compare->add_flag("--assert-irreducible", opt.assert_irreducible);
  add_budget(oracle_compare);
  auto* oracle_types = oracle_cmd->add_subcommand(
      "types", "maximal lattice counts by type: formula vs enumeration");
  oracle_types->add_option("--n", opt.n, "rank of the lattice block (dprime)")
      ->required();
  oracle_types->add_option("--prime", opt.prime, "prime")->required();
  oracle_types->add_option("--type", opt.type_text, "subset I, e.g. I=1,3")
      ->required();
  oracle_types->add_option("--r", opt.r_text, "multiplicities, e.g. 2,1")
      ->required();
  add_budget(oracle_types);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 2;
  }

  // flags
  if (flags_fn->parsed()) {
    RatFn f = flag_fn(opt.n);
    std::cout << "F_" << opt.n << " = " << f.to_string() << "\n";
    if (opt.check_funeq)
      std::cout << "funeq: " << (check_flag_funeq(opt.n) ? "holds" : "FAILS")
                << "\n";
    return 0;
  }
  if (flags_schubert->parsed()) {
    FlagType ft(opt.n, parse_subset(opt.type_text));
    std::cout << "c_I = " << schubert_c(ft).to_string() << "\n";
    return 0;
  }
  if (flags_count->parsed()) {
    FlagType ft(opt.n, parse_subset(opt.type_text));
    std::cout << "b_I = " << flag_count(ft).to_string() << "\n";
    return 0;
  }

  // group
  if (group_check->parsed()) {
    Presentation pres = load_presentation(opt.file);
    json j = report_to_json(
        hypothesis_report(pres, opt.prime, opt.assert_irreducible, opt.budget()));
    j["warnings"] = pres.warnings;
    std::cout << dump(j) << "\n";
    return 0;
  }
  if (group_pf->parsed()) {
    std::cout << "Pf = " << pfaffian(load_presentation(opt.file)).to_string()
              << "\n";
    return 0;
  }

  // zeta
  if (zeta_compute->parsed()) {
    if (!opt.assert_irreducible)
      throw std::domain_error(
          "the closed form assumes an irreducible Pfaffian; pass "
          "--assert-irreducible to acknowledge");
    Presentation pres = load_presentation(opt.file);
    LocalZeta z = normal_zeta_smooth(pres, point_count_from_flag(opt.n_poly));
    std::cout << "zeta = " << z.value.to_string() << "\n";
    json meta;
    meta["d"] = z.d;
    meta["dprime"] = z.dprime;
    meta["n_P"] = opt.n_poly.empty() ? "symbolic" : opt.n_poly;
    meta["funeq"] = report_to_json(verify_funeq(z));
    std::cout << dump(meta) << "\n";
    if (opt.prime > 0) {
      auto s = series_to_ints(z.value.series_coefficients(opt.prime, opt.terms));
      std::cout << "series at p=" << opt.prime << ": "
                << ints_to_json(s).dump() << "\n";
    }
    return 0;
  }
  if (zeta_grenham->parsed()) {
    LocalZeta z = grenham_zeta(opt.n);
    std::cout << "zeta = " << z.value.to_string() << "\n";
    FuneqReport funeq = verify_funeq(z);
    std::cout << "funeq: " << (funeq.holds ? "holds" : "FAILS") << " (sign "
              << funeq.sign << ", p^" << funeq.p_exponent << ", t^"
              << funeq.t_exponent << ")\n";
    if (opt.prime > 0) {
      auto s = series_to_ints(z.value.series_coefficients(opt.prime, opt.terms));
      std::cout << "series at p=" << opt.prime << ": "
                << ints_to_json(s).dump() << "\n";
    }
    return 0;
  }
  if (zeta_funeq->parsed()) {
    LocalZeta z;
    if (opt.n > 0) {
      z = grenham_zeta(opt.n);
    } else if (!opt.file.empty()) {
      z = normal_zeta_smooth(load_presentation(opt.file),
                             point_count_from_flag(opt.n_poly));
    } else {
      throw CLI::ValidationError("zeta funeq needs --file or --grenham");
    }
    std::cout << dump(report_to_json(verify_funeq(z))) << "\n";
    return 0;
  }
  if (zeta_shift->parsed()) {
    std::cout << zeta_p_shift(opt.a, opt.b).to_string() << "\n";
    return 0;
  }

  // geom
  if (geom_points->parsed()) {
    std::cout << count_points(hypersurface_from(opt), opt.prime, opt.budget())
              << "\n";
    return 0;
  }
  if (geom_smooth->parsed()) {
    std::cout << (is_smooth_mod_p(hypersurface_from(opt), opt.prime,
                                  opt.budget())
                      ? "smooth: true"
                      : "smooth: false")
              << "\n";
    return 0;
  }
  if (geom_lines->parsed()) {
    auto line = find_line(hypersurface_from(opt), opt.prime, opt.budget());
    if (!line) {
      std::cout << "line: none\n";
    } else {
      json j;
      j["a"] = line->a;
      j["b"] = line->b;
      std::cout << "line: " << j.dump() << "\n";
    }
    return 0;
  }
  if (geom_fano->parsed()) {
    std::cout << fano_count(hypersurface_from(opt), opt.prime, opt.k,
                            opt.budget())
              << "\n";
    return 0;
  }
  if (geom_iso->parsed()) {
    std::ifstream in(opt.file);
    if (!in) throw std::domain_error("cannot open " + opt.file);
    json doc;
    in >> doc;
    long long p = doc.at("p").get<long long>();
    SkewForm phi(p, doc.at("phi").get<IntMatrix>());
    SkewForm psi(p, doc.at("psi").get<IntMatrix>());
    int target = opt.dim > 0 ? opt.dim : doc.at("dim").get<int>();
    json j;
    j["pencil_all_degenerate"] = pencil_all_degenerate(phi, psi);
    auto basis = common_isotropic_subspace(phi, psi, target, opt.budget());
    j["isotropic_basis"] = basis ? json(*basis) : json(nullptr);
    std::cout << dump(j) << "\n";
    return 0;
  }

  // oracle
  if (oracle_count->parsed()) {
    Presentation pres = load_presentation(opt.file);
    auto counts = ideal_counts(pres, opt.prime, opt.terms, opt.budget());
    json j;
    j["prime"] = opt.prime;
    j["N"] = opt.terms;
    j["coefficients"] = ints_to_json(counts);
    std::cout << dump(j) << "\n";
    return 0;
  }
  if (oracle_compare->parsed()) {
    Presentation pres = load_presentation(opt.file);
    std::cout << dump(report_to_json(compare_report(
                     pres, opt.prime, opt.terms, opt.budget(),
                     opt.assert_irreducible)))
              << "\n";
    return 0;
  }
  if (oracle_types->parsed()) {
    TypeCount tc =
        count_lattices_of_type(opt.n, parse_subset(opt.type_text),
                               parse_subset(opt.r_text), opt.prime, opt.budget());
    json j;
    j["formula"] = int_to_json(tc.formula);
    j["enumerated"] = int_to_json(tc.enumerated);
    j["agree"] = tc.formula == tc.enumerated;
    std::cout << dump(j) << "\n";
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help and friends
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

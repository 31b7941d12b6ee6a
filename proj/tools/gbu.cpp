// gbu: command-line front end over the equivariant characteristic-class
// machinery — Steenrod normal forms, Wu classes, the dimension-twisted right
// action, fixture verification, vanishing certificates, and the geometric
// consequence tables.  Exit codes: 0 success/pass, 1 failure/inconclusive,
// 2 usage or configuration error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gbu/conseq.hpp"
#include "gbu/prover.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

struct Config {
  int max_degree = 12;
  int root_count = 7;  // >= floor(max_degree / 2)
  std::string format = "text";
  std::string corpus = "data/fixtures.jsonl";
  std::string certificate_out;
};

// The config file location comes from the GBU_CONFIG environment variable;
// every numeric limit used below flows from the resulting struct.
Config load_config() {
  Config cfg;
  const char* path = std::getenv("GBU_CONFIG");
  if (path != nullptr && *path != '\0') {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(std::string("cannot open config: ") + path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw std::runtime_error(std::string("invalid config JSON: ") + e.what());
    }
    cfg.max_degree = j.value("max_degree", cfg.max_degree);
    cfg.root_count = j.value("root_count", cfg.max_degree / 2 + 1);
    cfg.format = j.value("format", cfg.format);
    cfg.corpus = j.value("corpus", cfg.corpus);
    cfg.certificate_out = j.value("certificate_out", cfg.certificate_out);
  }
  if (cfg.max_degree < 0) throw std::runtime_error("config: negative max_degree");
  if (cfg.root_count < cfg.max_degree / 2)
    throw std::runtime_error("config: root_count below max_degree/2");
  if (cfg.format != "text" && cfg.format != "json")
    throw std::runtime_error("config: format must be text or json");
  return cfg;
}

struct ReportEntry {
  std::string name;
  bool pass;
  std::string detail;
};

json report_to_json(const std::vector<ReportEntry>& entries) {
  json j;
  j["format"] = "gbu-report/1";
  auto arr = json::array();
  int passed = 0, failed = 0;
  for (const auto& e : entries) {
    arr.push_back({{"name", e.name}, {"pass", e.pass}, {"detail", e.detail}});
    (e.pass ? passed : failed)++;
  }
  j["entries"] = std::move(arr);
  j["passed"] = passed;
  j["failed"] = failed;
  return j;
}

int print_report(const std::vector<ReportEntry>& entries, const std::string& format,
                 const std::string& label) {
  int failed = 0;
  for (const auto& e : entries) failed += e.pass ? 0 : 1;
  if (format == "json") {
    std::cout << report_to_json(entries).dump(2) << '\n';
  } else {
    for (const auto& e : entries)
      std::cout << (e.pass ? "[PASS] " : "[FAIL] ") << e.name
                << (e.detail.empty() ? "" : ": " + e.detail) << '\n';
    std::cout << label << ": " << (entries.size() - failed) << " passed, " << failed
              << " failed\n";
  }
  return failed == 0 ? 0 : 1;
}

// Substitute w -> a, c1 -> a^2, higher Chern classes -> 0 in Z/2[a]/(a^3).
bool conic_evaluates_to_zero(const gbu::PolyF2& p) {
  int surviving[3] = {0, 0, 0};
  for (const auto& m : p.terms()) {
    bool killed = false;
    int a_exp = m.omega;
    for (const auto& [index, exp] : m.cherns) {
      if (index >= 2) killed = true;
      else a_exp += 2 * exp;
    }
    if (!killed && a_exp < 3) surviving[a_exp] ^= 1;
  }
  return surviving[0] == 0 && surviving[1] == 0 && surviving[2] == 0;
}

std::vector<ReportEntry> run_selfcheck(const Config& cfg, bool inject_fault) {
  using namespace gbu;
  std::vector<ReportEntry> out;
  auto check = [&](const std::string& name, auto&& body) {
    try {
      std::string detail;
      bool ok = body(detail);
      out.push_back({name, ok, detail});
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };

  check("steenrod-adem-normal-form", [](std::string& d) {
    d = to_string(parse_steenrod("Sq2 Sq2"));
    return d == "Sq3 Sq1" && to_string(parse_steenrod("Sq1 Sq1")) == "0";
  });
  check("steenrod-antipode-involutive", [](std::string&) {
    for (int i = 1; i <= 10; ++i)
      if (antipode(antipode(sq(i))) != sq(i)) return false;
    SteenrodElement w = parse_steenrod("Sq4 Sq2 + Sq5");
    return antipode(antipode(w)) == w;
  });
  check("action-total-square-inverse", [&](std::string&) {
    PolyF2 generic = PolyF2::omega(8) + generic_chern(8);
    return chi_sq_total(sq_total(generic)) == generic &&
           sq_total(chi_sq_total(generic)) == generic;
  });
  check("gring-parse-roundtrip", [&](std::string&) {
    for (int d = 0; d <= 6; ++d) {
      PolyF2 p(6, monomials_of_degree(d));
      if (parse_poly(to_string(p), 6) != p) return false;
    }
    return true;
  });
  check("action-cartan-formula", [](std::string&) {
    PolyF2 x = parse_poly("w + c1", 8), y = parse_poly("c2 + w^2", 8);
    return sq_total(x * y) == sq_total(x) * sq_total(y);
  });
  check("charclass-wu-omega-coefficients", [](std::string&) {
    for (int n = 1; n <= 6; ++n) {
      PolyF2 v = wu_formula(n, 6);
      for (int k = 0; k <= 6; ++k) {
        bool has = false;
        const PolyF2 comp = v.component(k);
        for (const auto& m : comp.terms())
          if (m.cherns.empty() && m.omega == k) has = true;
        if (has != (coeff_N(n, k) == 1)) return false;
      }
    }
    return true;
  });
  check("charclass-odd-wu-is-todd", [](std::string&) {
    for (int n : {3, 5, 7, 9})
      if (wu_formula(n, n - 1).component(n - 1) != todd_t((n - 1) / 2, n - 1))
        return false;
    return true;
  });
  check("rightaction-unit-gives-wu", [](std::string&) {
    for (int n = 1; n <= 4; ++n) {
      WuContext ctx = make_wu_context(n, 2 * n + 2);
      if (right_sq_total(ctx, PolyF2::one(2 * n + 2)) != ctx.v) return false;
    }
    return true;
  });
  check("rightaction-total-inverse", [](std::string&) {
    for (int n = 1; n <= 3; ++n) {
      WuContext ctx = make_wu_context(n, 8);
      PolyF2 generic = PolyF2::omega(8) + generic_chern(8);
      if (right_chi_sq_total(ctx, right_sq_total(ctx, generic)) != generic)
        return false;
    }
    return true;
  });
  check("relations-degree-bound", [](std::string&) {
    for (int n = 1; n <= 5; ++n)
      for (int d = 0; d <= 2 * n + 2; ++d) {
        for (const auto& g : gen_f1(n, d))
          if (g.relation_degree() < n + 1) return false;
        for (const auto& g : gen_chains(n, d, n))
          if (g.relation_degree() < n + 1) return false;
        for (const auto& g : gen_rkl_catalog(n, d))
          if (g.relation_degree() < n + 1) return false;
      }
    return true;
  });
  check("relations-conic-model", [](std::string&) {
    for (int d = 2; d <= 4; ++d)
      for (const auto& g : gen_f1(1, d))
        if (!conic_evaluates_to_zero(g.mod2_payload())) return false;
    return true;
  });
  check("fixtures-corpus", [&](std::string& d) {
    auto report = verify_fixtures(load_fixtures_file(cfg.corpus));
    d = std::to_string(report.passed) + " fixtures";
    return report.all_passed();
  });
  check("prover-smallest-vanishing", [](std::string&) {
    auto outcome = prove_omega(2, 3);
    return proved(outcome) && verify_certificate(std::get<Certificate>(outcome));
  });
  check("prover-negative-control", [](std::string&) {
    return !proved(prove_omega(1, 2)) && !proved(prove_omega(3, 6));
  });
  check("prover-deterministic", [](std::string&) {
    auto a = certificate_to_json(std::get<Certificate>(prove_omega(2, 3)));
    auto b = certificate_to_json(std::get<Certificate>(prove_omega(2, 3)));
    return a.dump() == b.dump();
  });
  check("consequence-headlines", [](std::string&) {
    GeometricHypotheses surf;
    surf.dimension = 2;
    surf.no_real_points = surf.geometrically_irreducible = true;
    surf.smooth = surf.proper = true;
    surf.h_n_structure_sheaf_vanishes = true;
    GeometricHypotheses three = surf;
    three.dimension = 3;
    three.h_n_structure_sheaf_vanishes = false;
    three.uniruled_over_c = true;
    return level_bound(surf).value == 2 && level_bound(three).value == 4 &&
           quadric_omega_vanishes(2, 3) && !quadric_omega_vanishes(3, 6);
  });
  if (inject_fault)
    out.push_back({"injected-fault", false, "forced failure for report testing"});
  return out;
}

gbu::GeometricHypotheses hypotheses_from_flags(int dim, const std::vector<std::string>& flags,
                                               int genus) {
  using gbu::GeometricHypotheses;
  static const std::map<std::string, bool GeometricHypotheses::*> table = {
      {"no_real_points", &GeometricHypotheses::no_real_points},
      {"geometrically_irreducible", &GeometricHypotheses::geometrically_irreducible},
      {"smooth", &GeometricHypotheses::smooth},
      {"proper", &GeometricHypotheses::proper},
      {"no_compact_component", &GeometricHypotheses::no_compact_component},
      {"no_proper_component", &GeometricHypotheses::no_proper_component},
      {"uniruled_over_c", &GeometricHypotheses::uniruled_over_c},
      {"h_n_structure_sheaf_vanishes", &GeometricHypotheses::h_n_structure_sheaf_vanishes},
      {"coniveau_ge_1_on_hn", &GeometricHypotheses::coniveau_ge_1_on_hn},
      {"hn_unramified_vanishes", &GeometricHypotheses::hn_unramified_vanishes},
      {"quotient_torsion_free", &GeometricHypotheses::quotient_torsion_free},
      {"conic_bundle", &GeometricHypotheses::conic_bundle},
      {"enriques", &GeometricHypotheses::enriques},
  };
  GeometricHypotheses h;
  h.dimension = dim;
  h.genus = genus;
  for (const auto& name : flags) {
    auto it = table.find(name);
    if (it == table.end())
      throw CLI::ValidationError("--flags", "unknown hypothesis flag: " + name);
    h.*(it->second) = true;
  }
  return h;
}

void print_bound(const gbu::CitedBound& b, const std::string& format) {
  if (format == "json") {
    json j = {{"bound", b.value},
              {"citation", b.citation},
              {"exact", b.exact},
              {"note", b.note}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << (b.exact ? "exact value " : "bound ") << b.value << " ("
              << b.citation << ")";
    if (!b.note.empty()) std::cout << " -- " << b.note;
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  try {
    cfg = load_config();
  } catch (const std::exception& e) {
    std::cerr << "gbu: " << e.what() << '\n';
    return 2;
  }

  CLI::App app{"equivariant characteristic-class calculator"};
  app.require_subcommand(1);
  std::string format = cfg.format;
  app.add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::function<int()> run;

  // steenrod normalize|chi "<expr>"
  auto* steenrod_cmd = app.add_subcommand("steenrod", "Steenrod algebra normal forms");
  steenrod_cmd->require_subcommand(1);
  std::string steenrod_expr;
  auto* normalize_cmd =
      steenrod_cmd->add_subcommand("normalize", "admissible normal form");
  normalize_cmd->add_option("expr", steenrod_expr, "element expression")->required();
  normalize_cmd->callback([&] {
    run = [&]() {
      std::cout << gbu::to_string(gbu::parse_twisted(steenrod_expr)) << '\n';
      return 0;
    };
  });
  auto* chi_cmd = steenrod_cmd->add_subcommand("chi", "antipode, normalized");
  chi_cmd->add_option("expr", steenrod_expr, "element expression")->required();
  chi_cmd->callback([&] {
    run = [&]() {
      std::cout << gbu::to_string(gbu::twisted_antipode(gbu::parse_twisted(steenrod_expr)))
                << '\n';
      return 0;
    };
  });

  // wu --dim n [--max-degree d]
  auto* wu_cmd = app.add_subcommand("wu", "truncated Wu class of a dimension");
  int wu_dim = 0, wu_maxd = cfg.max_degree;
  wu_cmd->add_option("--dim", wu_dim, "manifold dimension")->required();
  wu_cmd->add_option("--max-degree", wu_maxd, "truncation bound");
  wu_cmd->callback([&] {
    run = [&]() {
      std::cout << gbu::to_string(gbu::wu_formula(wu_dim, wu_maxd)) << '\n';
      return 0;
    };
  });

  // nnk n k
  auto* nnk_cmd = app.add_subcommand("nnk", "coefficient N(n,k) of the Wu class");
  long long nnk_n = 0, nnk_k = 0;
  nnk_cmd->add_option("n", nnk_n, "exponent")->required();
  nnk_cmd->add_option("k", nnk_k, "degree")->required();
  nnk_cmd->callback([&] {
    run = [&]() {
      std::cout << gbu::coeff_N(nnk_n, nnk_k) << '\n';
      return 0;
    };
  });

  // todd m
  auto* todd_cmd = app.add_subcommand("todd", "mod-2 Todd polynomial t_m");
  int todd_m = 0;
  todd_cmd->add_option("m", todd_m, "index")->required();
  todd_cmd->callback([&] {
    run = [&]() {
      std::cout << gbu::to_string(gbu::todd_t(todd_m)) << '\n';
      return 0;
    };
  });

  // rightact --dim n "<x>" "<element>"
  auto* rightact_cmd = app.add_subcommand("rightact", "dimension-twisted right action");
  int ra_dim = 0, ra_maxd = cfg.max_degree;
  std::string ra_x, ra_elt;
  rightact_cmd->add_option("--dim", ra_dim, "manifold dimension")->required();
  rightact_cmd->add_option("--max-degree", ra_maxd, "truncation bound");
  rightact_cmd->add_option("x", ra_x, "polynomial acted upon")->required();
  rightact_cmd->add_option("element", ra_elt, "twisted Steenrod element")->required();
  rightact_cmd->callback([&] {
    run = [&]() {
      gbu::WuContext ctx = gbu::make_wu_context(ra_dim, ra_maxd);
      gbu::PolyF2 x = gbu::parse_poly(ra_x, ra_maxd);
      std::cout << gbu::to_string(gbu::right_apply(ctx, x, gbu::parse_twisted(ra_elt)))
                << '\n';
      return 0;
    };
  });

  // verify [--corpus path]
  auto* verify_cmd = app.add_subcommand("verify", "check the fixture corpus");
  std::string corpus = cfg.corpus;
  verify_cmd->add_option("--corpus", corpus, "fixture corpus path");
  verify_cmd->callback([&] {
    run = [&]() {
      auto report = gbu::verify_fixtures(gbu::load_fixtures_file(corpus));
      std::vector<ReportEntry> entries;
      for (const auto& e : report.entries)
        entries.push_back({e.fixture.tag, e.pass,
                           e.pass ? e.evaluated
                                  : "got " + e.evaluated + ", expected " + e.expected});
      return print_report(entries, format, "fixtures");
    };
  });

  // prove --dim n --exponent e [--emit cert.json]
  auto* prove_cmd = app.add_subcommand("prove", "certify an omega-power vanishing");
  int pr_dim = 0, pr_exp = 0;
  std::string emit = cfg.certificate_out;
  prove_cmd->add_option("--dim", pr_dim, "manifold dimension")->required();
  prove_cmd->add_option("--exponent", pr_exp, "omega exponent")->required();
  prove_cmd->add_option("--emit", emit, "write the certificate JSON here");
  prove_cmd->callback([&] {
    run = [&]() {
      auto outcome = gbu::prove_omega(pr_dim, pr_exp);
      if (!gbu::proved(outcome)) {
        const auto& miss = std::get<gbu::NotFound>(outcome);
        if (format == "json") {
          json j = {{"status", "inconclusive"}, {"dim", miss.dim},
                    {"exponent", miss.exponent}, {"rank", miss.rank},
                    {"deficit", miss.deficit},  {"residue", miss.residue}};
          std::cout << j.dump(2) << '\n';
        } else {
          std::cout << "inconclusive: no certificate for omega^" << miss.exponent
                    << " at dimension " << miss.dim << " (rank " << miss.rank
                    << ", deficit " << miss.deficit << ", unreachable residue "
                    << miss.residue << "); not a disproof\n";
        }
        return 1;
      }
      const auto& cert = std::get<gbu::Certificate>(outcome);
      if (!gbu::verify_certificate(cert)) {
        std::cerr << "gbu: internal error: certificate failed verification\n";
        return 1;
      }
      if (!emit.empty()) gbu::write_certificate_file(cert, emit);
      if (format == "json") {
        std::cout << gbu::certificate_to_json(cert).dump(2) << '\n';
      } else {
        std::cout << "proved: omega^" << pr_exp << " = 0 at dimension " << pr_dim
                  << " (" << cert.root.generators.size() << " generators, "
                  << cert.root.monomials.size() << " justified monomials, "
                  << cert.dependencies.size() << " dependencies)";
        if (!emit.empty()) std::cout << "; certificate written to " << emit;
        std::cout << '\n';
      }
      return 0;
    };
  });

  // check cert.json
  auto* check_cmd = app.add_subcommand("check", "verify an emitted certificate");
  std::string cert_path;
  check_cmd->add_option("certificate", cert_path, "certificate JSON path")->required();
  check_cmd->callback([&] {
    run = [&]() {
      gbu::Certificate cert = gbu::read_certificate_file(cert_path);
      if (!gbu::verify_certificate(cert)) {
        std::cout << "certificate INVALID\n";
        return 1;
      }
      std::cout << "certificate valid: omega^" << cert.root.exponent
                << " = 0 at dimension " << cert.root.dim << '\n';
      return 0;
    };
  });

  // consequences quadric|coindex|level
  auto* conseq_cmd = app.add_subcommand("consequences", "geometric consequence tables");
  conseq_cmd->require_subcommand(1);
  auto* quadric_cmd =
      conseq_cmd->add_subcommand("quadric", "omega-power vanishing on the quadric");
  int q_n = 0, q_e = 0;
  quadric_cmd->add_option("n", q_n, "dimension")->required();
  quadric_cmd->add_option("e", q_e, "exponent")->required();
  quadric_cmd->callback([&] {
    run = [&]() {
      bool v = gbu::quadric_omega_vanishes(q_n, q_e);
      if (format == "json") {
        std::cout << json{{"vanishes", v}}.dump() << '\n';
      } else {
        std::cout << (v ? "true" : "false") << '\n';
      }
      return 0;
    };
  });
  int h_dim = 0, h_genus = -1;
  std::vector<std::string> flag_names;
  for (auto [name, desc] :
       {std::pair{"coindex", "coindex bound from obstruction theory"},
        std::pair{"level", "level bound for the real function field"}}) {
    auto* sub = conseq_cmd->add_subcommand(name, desc);
    sub->add_option("--dim", h_dim, "dimension")->required();
    sub->add_option("--flags", flag_names, "hypothesis flags, comma separated")
        ->delimiter(',');
    sub->add_option("--genus", h_genus, "genus (curves only)");
    const bool is_level = std::string(name) == "level";
    sub->callback([&, is_level] {
      run = [&, is_level]() {
        auto h = hypotheses_from_flags(h_dim, flag_names, h_genus);
        print_bound(is_level ? gbu::level_bound(h) : gbu::coindex_bound(h), format);
        return 0;
      };
    });
  }

  // selfcheck [--json] [--inject-fault]
  auto* selfcheck_cmd = app.add_subcommand("selfcheck", "run the invariant suite");
  bool sc_json = false, sc_fault = false;
  selfcheck_cmd->add_flag("--json", sc_json, "emit the JSON report");
  selfcheck_cmd->add_flag("--inject-fault", sc_fault,
                          "append a forced failure (test mode)");
  selfcheck_cmd->callback([&] {
    run = [&]() {
      auto entries = run_selfcheck(cfg, sc_fault);
      return print_report(entries, sc_json ? "json" : format, "selfcheck");
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run();
  } catch (const CLI::ParseError& e) {
    std::cerr << "gbu: " << e.what() << '\n';
    return 2;
  } catch (const gbu::ParseError& e) {
    std::cerr << "gbu: parse error at position " << e.position << ": " << e.what()
              << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gbu: " << e.what() << '\n';
    return 1;
  }
}

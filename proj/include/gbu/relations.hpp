#pragma once
// Universal relation generators for a working dimension n, and the corpus of
// explicitly checked right-action identities.  Families:
//   f1_single_sq:      (m)Sq^l with deg m = 2n-l-k, 0 <= k < l    — zero mod 2
//   f2_chain:          (m)Sq^{2^l k}...Sq^{2k}Sq^k, twist(m) = n  — Bockstein zero
//   f3_beta_of_f1:     integral Bockstein image of an f1 payload
//   rkl_catalog:       (m)a for operations a sending the universal degree-k
//                      class to a reduction of an integral torsion class
//   product_lemmarec:  w^e P(c) transported from a proven lower dimension
// Payloads in the mod-2 ring vanish (or have vanishing Bockstein) on every
// admissible n-manifold; integral payloads are the vanishing relation itself.

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gbu/charclass.hpp"
#include "gbu/gring.hpp"
#include "gbu/rightaction.hpp"
#include "gbu/steenrod.hpp"
#include "json.hpp"

namespace gbu {

enum class RelationKind {
  f1_single_sq,
  f2_chain,
  f3_beta_of_f1,
  rkl_catalog,
  product_lemmarec,
};

enum class VanishingMode {
  mod2,       // the class itself is zero on every admissible manifold
  beta_null,  // its integral Bockstein is zero there
};

struct Provenance {
  std::string x;          // source monomial, text form
  std::string op;         // operator word applied to it, text form
  int l = 0;              // operator degree
  int k = 0;              // co-degree parameter of the family
  int chain_length = 0;   // number of letters in a chain word
  int twist_j = -1;       // Bockstein twist parity, when one is fixed
  int dep_dim = -1;       // transported products: dimension relied upon
  int dep_exponent = -1;  //   and the omega exponent proven there
};

struct RelationGenerator {
  int dim;
  RelationKind kind;
  VanishingMode mode;
  std::variant<PolyF2, PolyZTwisted> payload;
  Provenance prov;

  RelationGenerator(int n, RelationKind kind_, VanishingMode mode_,
                    std::variant<PolyF2, PolyZTwisted> payload_, Provenance prov_)
      : dim(n), kind(kind_), mode(mode_), payload(std::move(payload_)),
        prov(std::move(prov_)) {
    if (relation_degree() < dim + 1)
      throw std::logic_error("relation generator below the dimension bound");
  }

  const PolyF2& mod2_payload() const { return std::get<PolyF2>(payload); }
  const PolyZTwisted& integral_payload() const { return std::get<PolyZTwisted>(payload); }

  int payload_degree() const {
    if (const auto* p = std::get_if<PolyF2>(&payload)) {
      int d = -1;
      for (const auto& m : p->terms()) d = std::max(d, m.degree());
      return d;
    }
    const auto& q = std::get<PolyZTwisted>(payload);
    int d = -1;
    for (const auto& [m, c] : q.free_part()) d = std::max(d, m.degree());
    for (const auto& m : q.torsion_part().terms()) d = std::max(d, m.degree());
    return d;
  }

  // Degree in which the induced relation lives: a Bockstein raises a mod-2
  // payload by one, while an integral payload is already the relation.
  int relation_degree() const {
    int d = payload_degree();
    if (std::holds_alternative<PolyF2>(payload) && mode == VanishingMode::beta_null)
      return d + 1;
    return d;
  }
};

namespace detail {

inline int resolve_bound(int n, int max_degree) {
  return max_degree < 0 ? 2 * n + 2 : max_degree;
}

// Pure Chern monomials prod ci^ei with sum i*ei = m (total degree 2m),
// enumerated via partitions of m, largest part first.
inline void chern_monomials_rec(int remaining, int cap,
                                std::vector<std::pair<int, int>>& stack,
                                std::vector<Monomial>& out) {
  if (remaining == 0) {
    out.push_back(make_monomial(0, stack));
    return;
  }
  for (int part = std::min(remaining, cap); part >= 1; --part) {
    for (int mult = 1; mult * part <= remaining; ++mult) {
      stack.emplace_back(part, mult);
      chern_monomials_rec(remaining - mult * part, part - 1, stack, out);
      stack.pop_back();
    }
  }
}

}  // namespace detail

inline std::vector<Monomial> chern_monomials(int chern_degree) {
  if (chern_degree < 0) return {};
  std::vector<Monomial> out;
  std::vector<std::pair<int, int>> stack;
  detail::chern_monomials_rec(chern_degree, chern_degree, stack, out);
  std::sort(out.begin(), out.end(), monomial_less);
  return out;
}

// Every monomial of Z/2[w, (ci)] of the given total degree, canonically ordered.
inline std::vector<Monomial> monomials_of_degree(int degree) {
  std::vector<Monomial> out;
  for (int e = degree; e >= 0; --e) {
    if ((degree - e) % 2) continue;
    for (const Monomial& c : chern_monomials((degree - e) / 2)) {
      Monomial m = c;
      m.omega = e;
      out.push_back(std::move(m));
    }
  }
  std::sort(out.begin(), out.end(), monomial_less);
  return out;
}

namespace detail {

// Shared tail of the mod-2 families: act on each source monomial, drop the
// identically-zero payloads, and deduplicate equal payloads (first provenance
// wins; enumeration order is deterministic, so the output is too).
class GeneratorSink {
 public:
  explicit GeneratorSink(std::vector<RelationGenerator>& out) : out_(out) {}

  void emit(int n, RelationKind kind, VanishingMode mode, const PolyF2& payload,
            Provenance prov) {
    if (payload.is_zero()) return;
    if (!seen_.insert(to_string(payload)).second) return;
    out_.emplace_back(n, kind, mode, payload, std::move(prov));
  }

 private:
  std::vector<RelationGenerator>& out_;
  std::set<std::string> seen_;
};

}  // namespace detail

// Single-square family at payload degree d: all (m)Sq^l over monomials m with
// deg m = d - l, where k = 2n - d satisfies 0 <= k < l.
inline std::vector<RelationGenerator> gen_f1(int n, int d, int max_degree = -1) {
  const int maxd = detail::resolve_bound(n, max_degree);
  if (d > maxd) throw std::invalid_argument("target degree beyond bound");
  std::vector<RelationGenerator> out;
  const int k = 2 * n - d;
  if (k < 0 || k >= d) return out;
  detail::GeneratorSink sink(out);
  WuContext ctx = make_wu_context(n, maxd);
  for (int l = k + 1; l <= d; ++l) {
    for (const Monomial& m : monomials_of_degree(d - l)) {
      PolyF2 source(maxd, {m});
      Provenance prov;
      prov.x = to_string(source);
      prov.op = to_string(SqWord{l});
      prov.l = l;
      prov.k = k;
      sink.emit(n, RelationKind::f1_single_sq, VanishingMode::mod2,
                right_act_word(ctx, source, {l}), std::move(prov));
    }
  }
  return out;
}

// Chain family at payload degree d = 2n - k: all (m)Sq^{2^l k}...Sq^{2k}Sq^k
// with k = 2n - d >= 1, deg m = 2n - 2^{l+1}k, and twist(m) = n (mod 2).
// Their integral Bocksteins vanish for every twist; j records the caller's.
inline std::vector<RelationGenerator> gen_chains(int n, int d, int j, int max_degree = -1) {
  const int maxd = detail::resolve_bound(n, max_degree);
  if (d > maxd) throw std::invalid_argument("target degree beyond bound");
  std::vector<RelationGenerator> out;
  const int k = 2 * n - d;
  if (k < 1) return out;
  detail::GeneratorSink sink(out);
  WuContext ctx = make_wu_context(n, maxd);
  for (int l = 0; (2LL << l) * k <= 2 * n; ++l) {
    const int source_degree = 2 * n - (2 << l) * k;
    SqWord word;
    for (int step = l; step >= 0; --step) word.push_back((1 << step) * k);
    for (const Monomial& m : monomials_of_degree(source_degree)) {
      if (m.twist() != (n & 1)) continue;
      PolyF2 source(maxd, {m});
      Provenance prov;
      prov.x = to_string(source);
      prov.op = to_string(word);
      prov.l = l;
      prov.k = k;
      prov.chain_length = l + 1;
      prov.twist_j = j;
      sink.emit(n, RelationKind::f2_chain, VanishingMode::beta_null,
                right_act_word(ctx, source, word), std::move(prov));
    }
  }
  return out;
}

namespace detail {

struct CatalogEntry {
  SqWord word;
  int k;
};

// Operations known to send the universal degree-k class to the reduction of
// an integral torsion class.  Sq^1 qualifies for every k >= 1; the two longer
// words are the ones this calculus actually relies on.  Data-driven so more
// entries can be added; k stays <= n-1 to keep relations above degree n.
inline std::vector<CatalogEntry> rkl_entries(int n) {
  std::vector<CatalogEntry> entries;
  for (int k = 1; k <= n - 1; ++k) entries.push_back({{1}, k});
  if (n - 1 >= 1) entries.push_back({{2, 1}, 1});
  if (n - 1 >= 3) entries.push_back({{4, 1}, 3});
  return entries;
}

}  // namespace detail

// Torsion-lift family at payload degree d: (m)a over catalog operations a
// taking degree-k classes to reductions of torsion, and monomials m with
// deg m = 2n - l - k and twist(m) = n (mod 2).  Payload degree is 2n - k.
inline std::vector<RelationGenerator> gen_rkl_catalog(int n, int d, int max_degree = -1) {
  const int maxd = detail::resolve_bound(n, max_degree);
  std::vector<RelationGenerator> out;
  detail::GeneratorSink sink(out);
  WuContext ctx = make_wu_context(n, maxd);
  for (const auto& entry : detail::rkl_entries(n)) {
    if (2 * n - entry.k != d) continue;
    const int l = word_degree(entry.word);
    const int source_degree = 2 * n - l - entry.k;
    if (source_degree < 0 || d > maxd) continue;
    for (const Monomial& m : monomials_of_degree(source_degree)) {
      if (m.twist() != (n & 1)) continue;
      PolyF2 source(maxd, {m});
      Provenance prov;
      prov.x = to_string(source);
      prov.op = to_string(entry.word);
      prov.l = l;
      prov.k = entry.k;
      sink.emit(n, RelationKind::rkl_catalog, VanishingMode::mod2,
                right_act_word(ctx, source, entry.word), std::move(prov));
    }
  }
  return out;
}

// Integral Bockstein image of a mod-2 generator: the induced relation in the
// twisted integral ring.  The twist parity j is recorded in the provenance.
inline RelationGenerator beta_of(const RelationGenerator& g, int j) {
  if (!std::holds_alternative<PolyF2>(g.payload) || g.mode != VanishingMode::mod2)
    throw std::invalid_argument("Bockstein image needs a mod-2 generator");
  Provenance prov = g.prov;
  prov.twist_j = j;
  return RelationGenerator(g.dim, RelationKind::f3_beta_of_f1, VanishingMode::beta_null,
                           bockstein(j, g.mod2_payload()), std::move(prov));
}

// Dimension table for transported products: which omega exponents are settled
// at a given dimension without further work.
inline bool omega_power_settled(int dim, int e, const std::map<int, std::set<int>>& proven) {
  if (dim < 0 || e < 1) return false;
  if (e > 2 * dim) return true;                  // above the top degree
  if (dim % 2 == 0 && e == 2 * dim) return true; // torsion class in a free group
  auto it = proven.find(dim);
  return it != proven.end() && it->second.count(e) > 0;
}

// Products w^e P(c) at dimension n, for every Chern monomial P of degree d
// and every exponent e settled at dimension n - d.  The transported statement
// is integral: the torsion class w^e P vanishes on admissible n-manifolds.
inline std::vector<RelationGenerator> gen_lemmarec(
    int n, const std::map<int, std::set<int>>& proven, int max_degree = -1) {
  const int maxd = detail::resolve_bound(n, max_degree);
  for (const auto& [dim, exps] : proven) {
    if (dim < 0) throw std::invalid_argument("negative dimension in proven table");
    for (int e : exps)
      if (e < 1) throw std::invalid_argument("omega exponent must be positive");
  }
  std::vector<RelationGenerator> out;
  for (int d = 1; d <= n; ++d) {
    for (int e = 1; e + 2 * d <= maxd; ++e) {
      if (!omega_power_settled(n - d, e, proven)) continue;
      for (const Monomial& p : chern_monomials(d)) {
        Monomial m = p;
        m.omega = e;
        PolyZTwisted payload(maxd);
        payload.add_torsion(m);
        Provenance prov;
        prov.x = to_string(PolyF2(maxd, {p}));
        prov.dep_dim = n - d;
        prov.dep_exponent = e;
        prov.twist_j = (e + d) & 1;
        out.emplace_back(n, RelationKind::product_lemmarec, VanishingMode::beta_null,
                         std::move(payload), std::move(prov));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixture corpus: right-action identities checked against the engine.
// ---------------------------------------------------------------------------

struct Fixture {
  int dim = 0;
  std::string lhs;  // formal sum "(poly) Sq_a Sq_b + (poly) Sq_c + ..."
  std::string rhs;  // polynomial text
  std::string tag;  // stable corpus identifier
};

// Evaluates a formal right-action expression.  Each summand is a
// parenthesised polynomial followed by square letters applied left to right.
inline PolyF2 evaluate_right_expression(const WuContext& ctx, const std::string& text,
                                        int max_degree) {
  PolyF2 total(max_degree);
  std::size_t pos = 0;
  auto skip_ws = [&] { while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos; };
  while (true) {
    skip_ws();
    if (pos >= text.size() || text[pos] != '(')
      throw ParseError("expected '(' opening a summand", pos);
    const std::size_t open = pos++;
    int depth = 1;
    std::size_t close = pos;
    for (; close < text.size() && depth > 0; ++close) {
      if (text[close] == '(') ++depth;
      if (text[close] == ')') --depth;
    }
    if (depth > 0) throw ParseError("unbalanced '('", open);
    PolyF2 value = parse_poly(text.substr(pos, close - 1 - pos), max_degree);
    pos = close;
    SqWord word;
    while (true) {
      skip_ws();
      if (pos + 2 <= text.size() && text.compare(pos, 2, "Sq") == 0) {
        pos += 2;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
          throw ParseError("expected an exponent after Sq", pos);
        int i = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
          i = 10 * i + (text[pos++] - '0');
        word.push_back(i);
        continue;
      }
      break;
    }
    total += right_act_word(ctx, value, word);
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] != '+') throw ParseError("expected '+' between summands", pos);
    ++pos;
  }
  return total;
}

struct FixtureOutcome {
  Fixture fixture;
  bool pass = false;
  std::string evaluated;  // what the engine computed for lhs
  std::string expected;   // rhs as parsed and re-printed
};

struct FixtureReport {
  std::vector<FixtureOutcome> entries;
  int passed = 0;
  int failed = 0;
  bool all_passed() const { return failed == 0 && !entries.empty(); }
};

inline FixtureReport verify_fixtures(const std::vector<Fixture>& corpus) {
  FixtureReport report;
  for (const Fixture& f : corpus) {
    const int maxd = 2 * f.dim + 2;
    WuContext ctx = make_wu_context(f.dim, maxd);
    FixtureOutcome outcome;
    outcome.fixture = f;
    try {
      PolyF2 lhs = evaluate_right_expression(ctx, f.lhs, maxd);
      PolyF2 rhs = parse_poly(f.rhs, maxd);
      outcome.evaluated = to_string(lhs);
      outcome.expected = to_string(rhs);
      outcome.pass = lhs == rhs;
    } catch (const ParseError& e) {
      throw ParseError("fixture " + f.tag + ": " + e.what(), e.position);
    }
    (outcome.pass ? report.passed : report.failed)++;
    report.entries.push_back(std::move(outcome));
  }
  return report;
}

// One JSON object per non-empty line: {"dim": int, "lhs": str, "rhs": str, "tag": str}.
inline std::vector<Fixture> load_fixtures(std::istream& in) {
  std::vector<Fixture> corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      nlohmann::json rec = nlohmann::json::parse(line);
      Fixture f;
      f.dim = rec.at("dim").get<int>();
      f.lhs = rec.at("lhs").get<std::string>();
      f.rhs = rec.at("rhs").get<std::string>();
      f.tag = rec.at("tag").get<std::string>();
      corpus.push_back(std::move(f));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("corpus line ") + std::to_string(line_no) + ": " + e.what(),
                       line_no);
    }
  }
  return corpus;
}

inline std::vector<Fixture> load_fixtures_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return load_fixtures(in);
}

}  // namespace gbu

#pragma once
// F2 membership prover with certificates.  To certify that the integral class
// w^e vanishes on every admissible n-manifold, it expresses the mod-2 shadow
// w^(e-1) as
//     sum of relation-generator payloads  +  sum of justified monomials
// where every payload's Bockstein vanishes (mod-2 families do so trivially)
// and every residue monomial is either killed by the Bockstein of twist e
// (twist_match) or carries a transported lower-dimensional certificate
// (recursion).  Applying the Bockstein then yields w^e = 0.
//
// Solving happens over the blocked coordinates only (monomials with no
// justification); the residue lands in the allowed span by construction.
// Everything is deterministic: fixed generator enumeration, canonical column
// order, first-hit pivoting — identical inputs give byte-identical output.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gbu/relations.hpp"
#include "json.hpp"

namespace gbu {

struct JustifiedMonomial {
  Monomial monomial;
  bool twist_match = false;  // killed by the Bockstein of the target twist
  int dep_dim = -1;          // otherwise transported: proven dimension ...
  int dep_exponent = -1;     //   ... and omega exponent relied upon
};

struct CertificateCore {
  int dim = 0;
  int exponent = 0;     // the omega power being certified
  int max_degree = 0;   // working truncation bound
  std::string base_case;  // "", "top_degree", or "even_dim_torsion_free"
  std::vector<RelationGenerator> generators;
  std::vector<JustifiedMonomial> monomials;
};

struct Certificate {
  CertificateCore root;
  // Transitive closure of recursion dependencies, one core per (dim,
  // exponent), sorted by that key.  Base-case dependencies carry no core.
  std::vector<CertificateCore> dependencies;
};

struct NotFound {
  int dim = 0;
  int exponent = 0;
  int rank = 0;         // rank of the generator system on blocked coordinates
  int deficit = 0;      // independent unreachable directions
  std::string residue;  // an unreachable blocked component, printed
};

using ProofOutcome = std::variant<Certificate, NotFound>;

inline bool proved(const ProofOutcome& o) {
  return std::holds_alternative<Certificate>(o);
}

using AllowedMonomial = std::function<std::optional<JustifiedMonomial>(const Monomial&)>;

// Expresses a homogeneous target as generator payloads plus allowed monomials.
// Returns a core with dim/exponent left for the caller to fill, or NotFound.
inline std::variant<CertificateCore, NotFound> solve_membership(
    const PolyF2& target, const std::vector<RelationGenerator>& generators,
    const AllowedMonomial& allowed) {
  if (!target.is_homogeneous())
    throw std::invalid_argument("membership target must be homogeneous");
  CertificateCore core;
  core.max_degree = target.max_degree();
  if (target.is_zero()) return core;
  const int degree = target.terms().front().degree();
  for (const auto& g : generators) {
    const PolyF2& p = g.mod2_payload();  // throws on integral payloads
    if (p.is_zero() || !p.is_homogeneous() || p.terms().front().degree() != degree)
      throw DegreeMismatch("generator payload degree differs from the target");
  }

  // Classify every support monomial once; blocked ones become equations.
  std::map<std::string, std::optional<JustifiedMonomial>> classified;
  std::vector<Monomial> blocked;
  auto classify = [&](const Monomial& m) {
    std::string key = to_string(PolyF2(target.max_degree(), {m}));
    if (classified.emplace(key, allowed(m)).second && !classified[key].has_value())
      blocked.push_back(m);
  };
  for (const auto& m : target.terms()) classify(m);
  for (const auto& g : generators)
    for (const auto& m : g.mod2_payload().terms()) classify(m);
  std::sort(blocked.begin(), blocked.end(), monomial_less);

  auto blocked_index = [&](const Monomial& m) -> std::optional<std::size_t> {
    auto it = std::lower_bound(blocked.begin(), blocked.end(), m, monomial_less);
    if (it == blocked.end() || monomial_less(m, *it)) return std::nullopt;
    return static_cast<std::size_t>(it - blocked.begin());
  };

  // One row per blocked monomial: generator incidence bits plus an augment
  // bit for the target.  Row-reduce over generator columns in enumeration
  // order; free variables stay zero, so the solution is deterministic.
  const std::size_t cols = generators.size() + 1;
  const std::size_t words = (cols + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows(blocked.size(),
                                               std::vector<std::uint64_t>(words, 0));
  auto set_bit = [&](std::size_t r, std::size_t c) { rows[r][c / 64] ^= 1ULL << (c % 64); };
  auto get_bit = [&](std::size_t r, std::size_t c) {
    return (rows[r][c / 64] >> (c % 64)) & 1ULL;
  };
  for (std::size_t j = 0; j < generators.size(); ++j)
    for (const auto& m : generators[j].mod2_payload().terms())
      if (auto r = blocked_index(m)) set_bit(*r, j);
  for (const auto& m : target.terms())
    if (auto r = blocked_index(m)) set_bit(*r, generators.size());

  std::size_t rank = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, column)
  for (std::size_t j = 0; j < generators.size() && rank < rows.size(); ++j) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !get_bit(pivot, j)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && get_bit(r, j))
        for (std::size_t w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
    pivots.emplace_back(rank, j);
    ++rank;
  }

  std::vector<bool> chosen(generators.size(), false);
  for (const auto& [r, j] : pivots)
    if (get_bit(r, generators.size())) chosen[j] = true;

  PolyF2 combination = target;
  for (std::size_t j = 0; j < generators.size(); ++j)
    if (chosen[j]) combination += generators[j].mod2_payload();

  int deficit = 0;
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (get_bit(r, generators.size())) ++deficit;
  if (deficit > 0) {
    NotFound miss;
    miss.rank = static_cast<int>(rank);
    miss.deficit = deficit;
    PolyF2 unreachable(target.max_degree());
    for (const auto& m : combination.terms())
      if (blocked_index(m)) unreachable += PolyF2(target.max_degree(), {m});
    miss.residue = to_string(unreachable);
    return miss;
  }

  for (std::size_t j = 0; j < generators.size(); ++j)
    if (chosen[j]) core.generators.push_back(generators[j]);
  for (const auto& m : combination.terms()) {
    const auto& just = classified.at(to_string(PolyF2(target.max_degree(), {m})));
    if (!just.has_value())
      throw std::logic_error("solver residue escaped the allowed span");
    core.monomials.push_back(*just);
  }
  return core;
}

namespace detail {

inline int certificate_bound(int n, int e) { return std::max(2 * n + 2, e + 1); }

struct ProveMemo {
  std::map<std::pair<int, int>, ProofOutcome> done;
};

inline const ProofOutcome& prove_omega_impl(int n, int e, ProveMemo& memo) {
  if (n < 0) throw std::invalid_argument("negative dimension");
  if (e < 1) throw std::invalid_argument("omega exponent must be positive");
  const std::pair<int, int> key{n, e};
  if (auto it = memo.done.find(key); it != memo.done.end()) return it->second;

  const int maxd = certificate_bound(n, e);
  CertificateCore core;
  core.dim = n;
  core.exponent = e;
  core.max_degree = maxd;

  if (e > 2 * n) {
    core.base_case = "top_degree";
    return memo.done.emplace(key, Certificate{std::move(core), {}}).first->second;
  }
  if (n % 2 == 0 && e == 2 * n) {
    core.base_case = "even_dim_torsion_free";
    return memo.done.emplace(key, Certificate{std::move(core), {}}).first->second;
  }

  std::vector<RelationGenerator> pool = gen_f1(n, e - 1, maxd);
  for (auto& g : gen_chains(n, e - 1, e, maxd)) pool.push_back(std::move(g));
  for (auto& g : gen_rkl_catalog(n, e - 1, maxd)) pool.push_back(std::move(g));

  AllowedMonomial allowed = [&](const Monomial& m) -> std::optional<JustifiedMonomial> {
    if (m.twist() == (e & 1)) return JustifiedMonomial{m, true, -1, -1};
    const int chern_degree = (m.degree() - m.omega) / 2;
    if (chern_degree < 1 || n - chern_degree < 0) return std::nullopt;
    const int dep_dim = n - chern_degree;
    const int dep_exp = m.omega + 1;
    if (!proved(prove_omega_impl(dep_dim, dep_exp, memo))) return std::nullopt;
    return JustifiedMonomial{m, false, dep_dim, dep_exp};
  };

  PolyF2 target = e == 1 ? PolyF2::one(maxd) : PolyF2::omega(maxd, e - 1);
  auto outcome = solve_membership(target, pool, allowed);
  if (auto* miss = std::get_if<NotFound>(&outcome)) {
    miss->dim = n;
    miss->exponent = e;
    return memo.done.emplace(key, std::move(*miss)).first->second;
  }

  CertificateCore& found = std::get<CertificateCore>(outcome);
  found.dim = n;
  found.exponent = e;
  found.max_degree = maxd;

  // Flatten the transitive recursion closure; base cases carry no core.
  std::map<std::pair<int, int>, CertificateCore> flat;
  for (const auto& jm : found.monomials) {
    if (jm.twist_match) continue;
    if (omega_power_settled(jm.dep_dim, jm.dep_exponent, {})) continue;
    const auto& dep = std::get<Certificate>(memo.done.at({jm.dep_dim, jm.dep_exponent}));
    flat.emplace(std::pair{jm.dep_dim, jm.dep_exponent}, dep.root);
    for (const auto& inner : dep.dependencies)
      flat.emplace(std::pair{inner.dim, inner.exponent}, inner);
  }
  Certificate cert{std::move(found), {}};
  for (auto& [k, c] : flat) cert.dependencies.push_back(std::move(c));
  return memo.done.emplace(key, std::move(cert)).first->second;
}

}  // namespace detail

// Certifies w^e = 0 at dimension n, or reports an inconclusive NotFound.
// Pure: each call builds a private memo table, so concurrent calls from
// different threads are safe (the shared left-action caches have their own
// locks).
inline ProofOutcome prove_omega(int n, int e) {
  detail::ProveMemo memo;
  return detail::prove_omega_impl(n, e, memo);
}

// ---------------------------------------------------------------------------
// Serialization: one JSON object, lexicographically ordered keys, checksum
// over the canonical dump without the checksum field.
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace detail {

inline std::string kind_name(RelationKind k) {
  switch (k) {
    case RelationKind::f1_single_sq: return "f1_single_sq";
    case RelationKind::f2_chain: return "f2_chain";
    case RelationKind::f3_beta_of_f1: return "f3_beta_of_f1";
    case RelationKind::rkl_catalog: return "rkl_catalog";
    case RelationKind::product_lemmarec: return "product_lemmarec";
  }
  throw std::logic_error("unknown relation kind");
}

inline RelationKind kind_from_name(const std::string& s) {
  if (s == "f1_single_sq") return RelationKind::f1_single_sq;
  if (s == "f2_chain") return RelationKind::f2_chain;
  if (s == "f3_beta_of_f1") return RelationKind::f3_beta_of_f1;
  if (s == "rkl_catalog") return RelationKind::rkl_catalog;
  if (s == "product_lemmarec") return RelationKind::product_lemmarec;
  throw std::invalid_argument("unknown relation kind: " + s);
}

inline nlohmann::json core_to_json(const CertificateCore& core) {
  nlohmann::json j;
  j["dim"] = core.dim;
  j["exponent"] = core.exponent;
  j["max_degree"] = core.max_degree;
  j["base_case"] = core.base_case;
  j["target"] = core.exponent == 1
                    ? "1"
                    : to_string(PolyF2::omega(core.max_degree, core.exponent - 1));
  auto gens = nlohmann::json::array();
  for (const auto& g : core.generators) {
    nlohmann::json e;
    e["kind"] = kind_name(g.kind);
    e["x"] = g.prov.x;
    e["op"] = g.prov.op;
    e["l"] = g.prov.l;
    e["k"] = g.prov.k;
    e["chain_length"] = g.prov.chain_length;
    e["twist_j"] = g.prov.twist_j;
    e["payload"] = to_string(g.mod2_payload());
    gens.push_back(std::move(e));
  }
  j["generators"] = std::move(gens);
  auto mons = nlohmann::json::array();
  for (const auto& jm : core.monomials) {
    nlohmann::json e;
    e["monomial"] = to_string(PolyF2(core.max_degree, {jm.monomial}));
    e["justification"] = jm.twist_match ? "twist_match" : "recursion";
    if (!jm.twist_match) {
      e["dep_dim"] = jm.dep_dim;
      e["dep_exponent"] = jm.dep_exponent;
    }
    mons.push_back(std::move(e));
  }
  j["monomials"] = std::move(mons);
  return j;
}

inline CertificateCore core_from_json(const nlohmann::json& j) {
  CertificateCore core;
  core.dim = j.at("dim").get<int>();
  core.exponent = j.at("exponent").get<int>();
  core.max_degree = j.at("max_degree").get<int>();
  core.base_case = j.at("base_case").get<std::string>();
  for (const auto& e : j.at("generators")) {
    RelationKind kind = kind_from_name(e.at("kind").get<std::string>());
    VanishingMode mode = kind == RelationKind::f2_chain ? VanishingMode::beta_null
                                                        : VanishingMode::mod2;
    Provenance prov;
    prov.x = e.at("x").get<std::string>();
    prov.op = e.at("op").get<std::string>();
    prov.l = e.at("l").get<int>();
    prov.k = e.at("k").get<int>();
    prov.chain_length = e.at("chain_length").get<int>();
    prov.twist_j = e.at("twist_j").get<int>();
    PolyF2 payload = parse_poly(e.at("payload").get<std::string>(), core.max_degree);
    core.generators.emplace_back(core.dim, kind, mode, std::move(payload), std::move(prov));
  }
  for (const auto& e : j.at("monomials")) {
    JustifiedMonomial jm;
    PolyF2 m = parse_poly(e.at("monomial").get<std::string>(), core.max_degree);
    if (m.terms().size() != 1)
      throw std::invalid_argument("justified entry must be a single monomial");
    jm.monomial = m.terms().front();
    const std::string just = e.at("justification").get<std::string>();
    if (just == "twist_match") {
      jm.twist_match = true;
    } else if (just == "recursion") {
      jm.dep_dim = e.at("dep_dim").get<int>();
      jm.dep_exponent = e.at("dep_exponent").get<int>();
    } else {
      throw std::invalid_argument("unknown justification: " + just);
    }
    core.monomials.push_back(std::move(jm));
  }
  return core;
}

}  // namespace detail

inline constexpr const char* kCertificateFormat = "gbu-certificate/1";

inline nlohmann::json certificate_to_json(const Certificate& cert) {
  nlohmann::json j = detail::core_to_json(cert.root);
  j["format"] = kCertificateFormat;
  auto deps = nlohmann::json::array();
  for (const auto& c : cert.dependencies) deps.push_back(detail::core_to_json(c));
  j["dependencies"] = std::move(deps);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(j.dump())));
  j["checksum"] = hex;
  return j;
}

// Throws on malformed input or a checksum mismatch.
inline Certificate certificate_from_json(nlohmann::json j) {
  if (j.at("format").get<std::string>() != kCertificateFormat)
    throw std::invalid_argument("unsupported certificate format");
  const std::string stored = j.at("checksum").get<std::string>();
  j.erase("checksum");
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a64(j.dump())));
  if (stored != hex) throw std::invalid_argument("certificate checksum mismatch");
  Certificate cert;
  cert.root = detail::core_from_json(j);
  for (const auto& d : j.at("dependencies"))
    cert.dependencies.push_back(detail::core_from_json(d));
  return cert;
}

// Atomic write: temporary file in place, then rename.
inline void write_certificate_file(const Certificate& cert, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write: " + tmp);
    out << certificate_to_json(cert).dump(2) << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move " + tmp + " into place");
}

inline Certificate read_certificate_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open certificate: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("invalid certificate JSON: ") + e.what());
  }
  return certificate_from_json(std::move(j));
}

// ---------------------------------------------------------------------------
// Verification: re-derives every payload through the right action (never
// reusing solver state), checks family membership of each generator, the
// justification of each monomial, and exact re-expansion equality.
// Structural damage (dangling or cyclic dependencies) throws; a well-formed
// certificate that fails the mathematics returns false.
// ---------------------------------------------------------------------------

namespace detail {

inline SqWord parse_word_letters(const std::string& text) {
  SqWord word;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) { ++pos; continue; }
    if (text.compare(pos, 2, "Sq") != 0)
      throw ParseError("expected Sq", pos);
    pos += 2;
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
      throw ParseError("expected an exponent after Sq", pos);
    int i = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      i = 10 * i + (text[pos++] - '0');
    word.push_back(i);
  }
  return word;
}

inline bool verify_core(const CertificateCore& core,
                        const std::map<std::pair<int, int>, const CertificateCore*>& table) {
  if (core.max_degree != certificate_bound(core.dim, core.exponent)) return false;
  if (!core.base_case.empty()) {
    if (!core.generators.empty() || !core.monomials.empty()) return false;
    if (core.base_case == "top_degree") return core.exponent > 2 * core.dim;
    if (core.base_case == "even_dim_torsion_free")
      return core.dim % 2 == 0 && core.exponent == 2 * core.dim;
    return false;
  }

  const int n = core.dim;
  const int degree = core.exponent - 1;
  const int maxd = core.max_degree;
  WuContext ctx = make_wu_context(n, maxd);
  PolyF2 sum(maxd);

  for (const auto& g : core.generators) {
    if (g.dim != n) return false;
    PolyF2 source = parse_poly(g.prov.x, maxd);
    if (source.terms().size() != 1) return false;
    const Monomial& x = source.terms().front();
    SqWord word = parse_word_letters(g.prov.op);
    if (word.empty()) return false;
    const int wdeg = word_degree(word);
    switch (g.kind) {
      case RelationKind::f1_single_sq: {
        if (word.size() != 1 || word.front() != g.prov.l) return false;
        if (g.prov.k != 2 * n - degree) return false;
        if (g.prov.k < 0 || g.prov.k >= g.prov.l) return false;
        if (x.degree() != degree - g.prov.l) return false;
        break;
      }
      case RelationKind::f2_chain: {
        const int k = g.prov.k;
        const int len = static_cast<int>(word.size());
        if (k < 1 || len != g.prov.chain_length || len < 1) return false;
        for (int step = 0; step < len; ++step)
          if (word[step] != (1 << (len - 1 - step)) * k) return false;
        if (x.degree() != 2 * n - (1 << len) * k) return false;
        if (x.twist() != (n & 1)) return false;
        if (2 * n - k != degree) return false;
        break;
      }
      case RelationKind::rkl_catalog: {
        bool listed = false;
        for (const auto& entry : rkl_entries(n))
          if (entry.word == word && entry.k == g.prov.k) listed = true;
        if (!listed) return false;
        if (x.degree() != 2 * n - wdeg - g.prov.k) return false;
        if (x.twist() != (n & 1)) return false;
        if (2 * n - g.prov.k != degree) return false;
        break;
      }
      default:
        return false;  // integral families cannot appear in a mod-2 decomposition
    }
    PolyF2 payload = right_act_word(ctx, source, word);
    if (payload != g.mod2_payload()) return false;
    if (payload.is_zero() || !payload.is_homogeneous() ||
        payload.terms().front().degree() != degree)
      return false;
    sum += payload;
  }

  std::set<std::string> seen;
  for (const auto& jm : core.monomials) {
    const Monomial& m = jm.monomial;
    if (m.degree() != degree) return false;
    if (!seen.insert(to_string(PolyF2(maxd, {m}))).second) return false;
    if (jm.twist_match) {
      if (m.twist() != (core.exponent & 1)) return false;
    } else {
      if (m.twist() == (core.exponent & 1)) return false;
      const int chern_degree = (m.degree() - m.omega) / 2;
      if (chern_degree < 1) return false;
      if (jm.dep_dim != n - chern_degree) return false;
      if (jm.dep_exponent != m.omega + 1) return false;
      if (jm.dep_dim >= n) throw std::invalid_argument("cyclic certificate dependency");
      if (!omega_power_settled(jm.dep_dim, jm.dep_exponent, {}) &&
          table.find({jm.dep_dim, jm.dep_exponent}) == table.end())
        throw std::invalid_argument("dangling certificate dependency");
    }
    sum += PolyF2(maxd, {m});
  }

  PolyF2 target = core.exponent == 1 ? PolyF2::one(maxd)
                                     : PolyF2::omega(maxd, core.exponent - 1);
  return sum == target;
}

}  // namespace detail

inline bool verify_certificate(const Certificate& cert) {
  std::map<std::pair<int, int>, const CertificateCore*> table;
  for (const auto& c : cert.dependencies)
    if (!table.emplace(std::pair{c.dim, c.exponent}, &c).second)
      throw std::invalid_argument("duplicate certificate dependency");
  if (table.count({cert.root.dim, cert.root.exponent}))
    throw std::invalid_argument("cyclic certificate dependency");
  if (!detail::verify_core(cert.root, table)) return false;
  for (const auto& c : cert.dependencies)
    if (!detail::verify_core(c, table)) return false;
  return true;
}

}  // namespace gbu

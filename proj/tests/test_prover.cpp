#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gbu/prover.hpp"

using namespace gbu;

namespace {

const Certificate& cert_of(const ProofOutcome& o) { return std::get<Certificate>(o); }
const NotFound& miss_of(const ProofOutcome& o) { return std::get<NotFound>(o); }

Certificate prove_cert(int n, int e) {
  auto outcome = prove_omega(n, e);
  return std::get<Certificate>(std::move(outcome));
}

PolyF2 re_expand(const CertificateCore& core) {
  PolyF2 sum(core.max_degree);
  for (const auto& g : core.generators) sum += g.mod2_payload();
  for (const auto& jm : core.monomials) sum += PolyF2(core.max_degree, {jm.monomial});
  return sum;
}

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("fnv1a64 matches the published test vectors") {
  REQUIRE(fnv1a64("") == 0xcbf29ce484222325ULL);
  REQUIRE(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  REQUIRE(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("membership solver handles trivial and malformed inputs") {
  AllowedMonomial nothing = [](const Monomial&) { return std::nullopt; };

  auto zero = solve_membership(PolyF2(6), {}, nothing);
  REQUIRE(std::holds_alternative<CertificateCore>(zero));
  REQUIRE(std::get<CertificateCore>(zero).generators.empty());
  REQUIRE(std::get<CertificateCore>(zero).monomials.empty());

  auto blockedv = solve_membership(PolyF2::omega(6, 2), {}, nothing);
  REQUIRE(std::holds_alternative<NotFound>(blockedv));
  const auto& miss = std::get<NotFound>(blockedv);
  REQUIRE(miss.rank == 0);
  REQUIRE(miss.deficit == 1);
  REQUIRE(miss.residue == "w^2");

  REQUIRE_THROWS_AS(
      solve_membership(parse_poly("w + c1", 6), {}, nothing),
      std::invalid_argument);

  auto pool = gen_chains(2, 2, 3);  // payload degree 2
  REQUIRE_THROWS_AS(solve_membership(PolyF2::omega(6, 3), pool, nothing),
                    DegreeMismatch);
}

TEST_CASE("membership solver decomposes w^2 against the dimension-2 chain") {
  auto pool = gen_chains(2, 2, 3);
  REQUIRE(pool.size() == 1);
  AllowedMonomial odd_twist = [](const Monomial& m) -> std::optional<JustifiedMonomial> {
    if (m.twist() == 1) return JustifiedMonomial{m, true, -1, -1};
    return std::nullopt;
  };
  auto got = solve_membership(PolyF2::omega(pool[0].mod2_payload().max_degree(), 2),
                              pool, odd_twist);
  REQUIRE(std::holds_alternative<CertificateCore>(got));
  const auto& core = std::get<CertificateCore>(got);
  REQUIRE(core.generators.size() == 1);
  REQUIRE(to_string(core.generators[0].mod2_payload()) == "w^2 + c1");
  REQUIRE(core.monomials.size() == 1);
  REQUIRE(to_string(core.monomials[0].monomial) == "c1");
  REQUIRE(core.monomials[0].twist_match);
}

TEST_CASE("membership solver records recursion justifications it is given") {
  auto pool = gen_chains(2, 2, 3);
  AllowedMonomial tagged = [](const Monomial& m) -> std::optional<JustifiedMonomial> {
    if (m.omega == 0) return JustifiedMonomial{m, false, 1, 1};
    return std::nullopt;
  };
  auto got = solve_membership(PolyF2::omega(6, 2), pool, tagged);
  const auto& core = std::get<CertificateCore>(got);
  REQUIRE(core.monomials.size() == 1);
  REQUIRE_FALSE(core.monomials[0].twist_match);
  REQUIRE(core.monomials[0].dep_dim == 1);
  REQUIRE(core.monomials[0].dep_exponent == 1);
}

TEST_CASE("omega powers vanish at the low paper points") {
  for (auto [n, e] : {std::pair{2, 3}, {4, 7}, {5, 9}, {6, 10}}) {
    CAPTURE(n, e);
    auto outcome = prove_omega(n, e);
    REQUIRE(proved(outcome));
    const Certificate& cert = cert_of(outcome);
    REQUIRE(cert.root.dim == n);
    REQUIRE(cert.root.exponent == e);
    REQUIRE(cert.root.base_case.empty());
    REQUIRE_FALSE(cert.root.generators.empty());
    REQUIRE(re_expand(cert.root) == PolyF2::omega(cert.root.max_degree, e - 1));
    REQUIRE(verify_certificate(cert));
  }
}

TEST_CASE("the smallest vanishing needs nothing but the twist filter") {
  // At degree 2 the only monomials are w^2 (the target) and c1, so no
  // recursion can appear: the residue must be twist-killed.
  Certificate cert = prove_cert(2, 3);
  REQUIRE(cert.dependencies.empty());
  REQUIRE(cert.root.monomials.size() == 1);
  REQUIRE(cert.root.monomials[0].twist_match);
  REQUIRE(to_string(cert.root.monomials[0].monomial) == "c1");
}

TEST_CASE("omega^(2n-1) vanishes away from dimensions 1, 3, 7") {
  for (int n : {2, 4, 5, 6, 8, 9}) {
    CAPTURE(n);
    auto outcome = prove_omega(n, 2 * n - 1);
    REQUIRE(proved(outcome));
    REQUIRE(verify_certificate(cert_of(outcome)));
  }
}

TEST_CASE("omega^(2n-1) vanishes up to dimension twelve", "[heavy]") {
  for (int n : {10, 11, 12}) {
    CAPTURE(n);
    auto outcome = prove_omega(n, 2 * n - 1);
    REQUIRE(proved(outcome));
    REQUIRE(verify_certificate(cert_of(outcome)));
  }
}

TEST_CASE("recursion dependencies are recorded, flattened, and sorted") {
  // At dimension 9 the only provable transport target is (5, 9): the even
  // chern degrees 2, 6, 8 would need dimensions 7, 3, 1.
  Certificate cert = prove_cert(9, 17);
  bool used_recursion = false;
  for (const auto& jm : cert.root.monomials)
    if (!jm.twist_match) {
      used_recursion = true;
      REQUIRE(jm.dep_dim < 9);
      REQUIRE(jm.dep_exponent == jm.monomial.omega + 1);
    }
  REQUIRE(used_recursion);
  REQUIRE_FALSE(cert.dependencies.empty());
  for (std::size_t i = 1; i < cert.dependencies.size(); ++i) {
    auto a = std::pair{cert.dependencies[i - 1].dim, cert.dependencies[i - 1].exponent};
    auto b = std::pair{cert.dependencies[i].dim, cert.dependencies[i].exponent};
    REQUIRE(a < b);
  }
  bool has_5_9 = false;
  for (const auto& c : cert.dependencies)
    if (c.dim == 5 && c.exponent == 9) has_5_9 = true;
  REQUIRE(has_5_9);
}

TEST_CASE("exponents past the manifold dimension settle as base cases") {
  for (auto [n, e] : {std::pair{3, 7}, {0, 1}, {5, 12}}) {
    CAPTURE(n, e);
    Certificate cert = prove_cert(n, e);
    REQUIRE(cert.root.base_case == "top_degree");
    REQUIRE(cert.root.generators.empty());
    REQUIRE(verify_certificate(cert));
  }
  Certificate even_top = prove_cert(2, 4);
  REQUIRE(even_top.root.base_case == "even_dim_torsion_free");
  REQUIRE(verify_certificate(even_top));
}

TEST_CASE("no certificate appears at the known nonvanishing points") {
  for (auto [n, e] : {std::pair{1, 1}, {1, 2}, {3, 6}, {7, 14}}) {
    CAPTURE(n, e);
    auto outcome = prove_omega(n, e);
    REQUIRE_FALSE(proved(outcome));
    const NotFound& miss = miss_of(outcome);
    REQUIRE(miss.dim == n);
    REQUIRE(miss.exponent == e);
    REQUIRE(miss.deficit >= 1);
    REQUIRE_FALSE(miss.residue.empty());
    REQUIRE(miss.residue != "0");
  }
  REQUIRE(miss_of(prove_omega(1, 1)).residue == "1");
}

TEST_CASE("the open exponent at dimension ten stays inconclusive") {
  auto outcome = prove_omega(10, 17);
  REQUIRE_FALSE(proved(outcome));
  REQUIRE(miss_of(outcome).deficit >= 1);
}

TEST_CASE("nonsense prover arguments are rejected") {
  REQUIRE_THROWS_AS(prove_omega(-1, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(prove_omega(2, 0), std::invalid_argument);
}

TEST_CASE("certificates serialize deterministically") {
  auto first = certificate_to_json(prove_cert(6, 11)).dump(2);
  auto second = certificate_to_json(prove_cert(6, 11)).dump(2);
  REQUIRE(first == second);

  nlohmann::json j = certificate_to_json(prove_cert(2, 3));
  REQUIRE(j.at("format") == kCertificateFormat);
  REQUIRE(j.at("checksum").get<std::string>().size() == 16);
  REQUIRE(j.at("dim") == 2);
  REQUIRE(j.at("exponent") == 3);
  REQUIRE(j.at("target") == "w^2");
}

TEST_CASE("certificates survive a file round trip") {
  const std::string path = temp_path("gbu_cert_roundtrip.json");
  Certificate cert = prove_cert(8, 15);
  write_certificate_file(cert, path);
  Certificate loaded = read_certificate_file(path);
  REQUIRE(certificate_to_json(loaded).dump() == certificate_to_json(cert).dump());
  REQUIRE(verify_certificate(loaded));
  std::remove(path.c_str());
}

TEST_CASE("tampered certificates fail verification") {
  Certificate cert = prove_cert(2, 3);
  REQUIRE(verify_certificate(cert));

  SECTION("a dropped generator breaks re-expansion") {
    cert.root.generators.pop_back();
    REQUIRE_FALSE(verify_certificate(cert));
  }
  SECTION("a dropped monomial breaks re-expansion") {
    cert.root.monomials.pop_back();
    REQUIRE_FALSE(verify_certificate(cert));
  }
  SECTION("a twist-killed monomial cannot claim recursion") {
    REQUIRE(cert.root.monomials[0].twist_match);
    cert.root.monomials[0].twist_match = false;
    cert.root.monomials[0].dep_dim = 1;
    cert.root.monomials[0].dep_exponent = 1;
    REQUIRE_FALSE(verify_certificate(cert));
  }
  SECTION("the root among its own dependencies is a cycle") {
    cert.dependencies.push_back(cert.root);
    REQUIRE_THROWS_WITH(verify_certificate(cert),
                        Catch::Matchers::ContainsSubstring("cyclic"));
  }
  SECTION("a wrong truncation bound is rejected") {
    cert.root.max_degree += 2;
    REQUIRE_FALSE(verify_certificate(cert));
  }
}

TEST_CASE("a recursion monomial without its dependency dangles") {
  Certificate cert = prove_cert(9, 17);
  REQUIRE_FALSE(cert.dependencies.empty());
  cert.dependencies.clear();
  REQUIRE_THROWS_WITH(verify_certificate(cert),
                      Catch::Matchers::ContainsSubstring("dangling"));
}

TEST_CASE("tampered certificate files are rejected on load") {
  nlohmann::json j = certificate_to_json(cert_of(prove_omega(2, 3)));

  SECTION("an edited field breaks the checksum") {
    j["dim"] = 3;
    REQUIRE_THROWS_WITH(certificate_from_json(j),
                        Catch::Matchers::ContainsSubstring("checksum"));
  }
  SECTION("an edited checksum breaks itself") {
    j["checksum"] = "0000000000000000";
    REQUIRE_THROWS_WITH(certificate_from_json(j),
                        Catch::Matchers::ContainsSubstring("checksum"));
  }
  SECTION("an alien format tag is rejected") {
    j["format"] = "gbu-certificate/999";
    REQUIRE_THROWS_WITH(certificate_from_json(j),
                        Catch::Matchers::ContainsSubstring("format"));
  }
  SECTION("missing file") {
    REQUIRE_THROWS_AS(read_certificate_file(temp_path("gbu_no_such_cert.json")),
                      std::runtime_error);
  }
  SECTION("unparseable file") {
    const std::string path = temp_path("gbu_bad_cert.json");
    std::ofstream(path) << "{ not json";
    REQUIRE_THROWS_WITH(read_certificate_file(path),
                        Catch::Matchers::ContainsSubstring("invalid certificate JSON"));
    std::remove(path.c_str());
  }
}

TEST_CASE("verification re-derives payloads instead of trusting them") {
  Certificate cert = cert_of(prove_omega(4, 7));
  REQUIRE_FALSE(cert.root.generators.empty());
  // Swap in a claimed payload that the right action does not produce.
  auto& g = cert.root.generators.front();
  PolyF2 fake = g.mod2_payload() + parse_poly("w^6", g.mod2_payload().max_degree());
  RelationGenerator forged(g.dim, g.kind, g.mode, fake, g.prov);
  g = forged;
  REQUIRE_FALSE(verify_certificate(cert));
}

TEST_CASE("dependency certificates are verified recursively") {
  Certificate cert = cert_of(prove_omega(8, 15));
  REQUIRE_FALSE(cert.dependencies.empty());
  auto& dep = cert.dependencies.front();
  REQUIRE_FALSE(dep.generators.empty());
  dep.generators.pop_back();
  REQUIRE_FALSE(verify_certificate(cert));
}

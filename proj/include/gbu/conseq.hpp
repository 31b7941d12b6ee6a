#pragma once
// Geometric consequences of the vanishing machinery: coindex bounds from
// obstruction theory and level bounds for real function fields.  Both are
// driven by declarative rule tables — one row per theorem, each row a guard
// over the asserted hypotheses plus a bound and a citation slug — so the
// engine never combines hypotheses beyond what a single row licenses.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbu {

// Hypotheses are asserted by the caller, never verified here.
struct GeometricHypotheses {
  int dimension = 0;
  bool no_real_points = false;
  bool geometrically_irreducible = false;
  bool smooth = false;
  bool proper = false;
  bool no_compact_component = false;
  bool no_proper_component = false;
  bool uniruled_over_c = false;
  bool h_n_structure_sheaf_vanishes = false;   // H^n(X, O_X) = 0
  bool coniveau_ge_1_on_hn = false;            // all of H^n(X(C), Q)
  bool hn_unramified_vanishes = false;         // H^n_nr(X(C), Q) = 0
  bool quotient_torsion_free = false;          // 2-torsion of H^{n+1}/N^2 trivial
  bool conic_bundle = false;                   // generic fiber a conic
  bool enriques = false;
  int genus = -1;                              // curves only; -1 = unspecified
};

inline void validate(const GeometricHypotheses& h) {
  if (h.dimension < 0) throw std::invalid_argument("negative dimension");
  if (h.genus >= 0 && h.dimension != 1)
    throw std::invalid_argument("genus is a curve invariant (dimension 1)");
  if (h.enriques && h.dimension != 2)
    throw std::invalid_argument("an Enriques surface has dimension 2");
  if (h.proper && h.no_compact_component)
    throw std::invalid_argument("a proper variety has compact complex points");
  if (h.proper && h.no_proper_component)
    throw std::invalid_argument("proper contradicts having no proper component");
}

// Number of ones in the binary expansion.
inline int alpha(int m) {
  if (m < 0) throw std::invalid_argument("alpha needs a nonnegative argument");
  int count = 0;
  for (unsigned v = static_cast<unsigned>(m); v != 0; v >>= 1) count += v & 1u;
  return count;
}

inline bool is_pow2_minus_1(int n) { return (n & (n + 1)) == 0 && n >= 0; }

// On the anisotropic quadric of dimension n, omega^e vanishes exactly when
// some 2^k - 1 separates the dimension from the exponent.
inline bool quadric_omega_vanishes(int n, int e) {
  for (long long k = 1; k - 1 <= e; k *= 2)
    if (n < k - 1 && k - 1 <= e) return true;
  return false;
}

struct CitedBound {
  int value = 0;
  bool exact = false;  // classification rows give equalities, not bounds
  std::string citation;
  std::string note;
};

namespace detail {

struct ConsequenceRule {
  std::string citation;
  bool exact;
  std::function<bool(const GeometricHypotheses&)> applies;
  std::function<int(int)> bound;  // dimension -> value
};

inline const std::vector<ConsequenceRule>& coindex_rules() {
  static const std::vector<ConsequenceRule> rules = {
      {"enriques-surface", true,
       [](const GeometricHypotheses& h) { return h.enriques; },
       [](int) { return 3; }},
      {"curve-classification", true,
       [](const GeometricHypotheses& h) {
         return h.dimension == 1 && h.genus >= 0 && !h.geometrically_irreducible;
       },
       [](int) { return 0; }},
      {"curve-classification", true,
       [](const GeometricHypotheses& h) {
         return h.dimension == 1 && h.genus >= 0 && h.geometrically_irreducible &&
                h.genus % 2 == 1;
       },
       [](int) { return 1; }},
      {"curve-classification", true,
       [](const GeometricHypotheses& h) {
         return h.dimension == 1 && h.genus >= 0 && h.geometrically_irreducible &&
                h.genus % 2 == 0;
       },
       [](int) { return 2; }},
      {"stably-complex-open-improved", false,
       [](const GeometricHypotheses& h) {
         return h.smooth && h.no_compact_component && !is_pow2_minus_1(h.dimension);
       },
       [](int n) { return 2 * n - 2; }},
      {"stably-complex-open", false,
       [](const GeometricHypotheses& h) { return h.smooth && h.no_compact_component; },
       [](int n) { return 2 * n - 1; }},
      {"stably-complex-improved", false,
       [](const GeometricHypotheses& h) {
         return h.smooth && !is_pow2_minus_1(h.dimension);
       },
       [](int n) { return 2 * n - 1; }},
      {"stably-complex", false,
       [](const GeometricHypotheses& h) { return h.smooth; },
       [](int n) { return 2 * n; }},
      {"algebraic-singular-improved", false,
       [](const GeometricHypotheses& h) {
         return h.no_proper_component || !is_pow2_minus_1(h.dimension);
       },
       [](int n) { return 2 * n - 1; }},
      {"algebraic-singular", false, [](const GeometricHypotheses&) { return true; },
       [](int n) { return 2 * n; }},
  };
  return rules;
}

inline const std::vector<ConsequenceRule>& level_rules() {
  static const std::vector<ConsequenceRule> rules = {
      {"surface-h2-vanishes", false,
       [](const GeometricHypotheses& h) {
         return h.dimension == 2 && h.h_n_structure_sheaf_vanishes;
       },
       [](int) { return 2; }},
      {"even-dimension-coniveau", false,
       [](const GeometricHypotheses& h) {
         return h.dimension >= 2 && h.dimension % 2 == 0 && h.coniveau_ge_1_on_hn;
       },
       [](int n) { return 1 << (n - 1); }},
      {"odd-dimension-unramified", false,
       [](const GeometricHypotheses& h) {
         return h.dimension >= 3 && h.dimension % 2 == 1 &&
                h.hn_unramified_vanishes && h.quotient_torsion_free;
       },
       [](int n) { return 1 << (n - 1); }},
      {"conic-bundle", false,
       [](const GeometricHypotheses& h) {
         return h.dimension >= 2 && h.conic_bundle;
       },
       [](int n) { return 1 << (n - 1); }},
      {"uniruled-even", false,
       [](const GeometricHypotheses& h) {
         return h.dimension >= 2 && h.dimension % 2 == 0 && h.uniruled_over_c;
       },
       [](int n) { return 1 << (n - 1); }},
      {"uniruled-threefold", false,
       [](const GeometricHypotheses& h) {
         return h.dimension == 3 && h.uniruled_over_c;
       },
       [](int) { return 4; }},
      {"pfister-power", false, [](const GeometricHypotheses&) { return true; },
       [](int n) { return 1 << n; }},
  };
  return rules;
}

inline CitedBound best_rule(const std::vector<ConsequenceRule>& rules,
                            const GeometricHypotheses& h) {
  const ConsequenceRule* best = nullptr;
  int value = 0;
  for (const auto& rule : rules) {
    if (!rule.applies(h)) continue;
    const int v = rule.bound(h.dimension);
    if (best == nullptr || v < value) {
      best = &rule;
      value = v;
    }
  }
  if (best == nullptr) throw std::logic_error("no consequence rule applies");
  return CitedBound{value, best->exact, best->citation, ""};
}

}  // namespace detail

// Smallest coindex bound any single theorem row yields for these hypotheses.
inline CitedBound coindex_bound(const GeometricHypotheses& h) {
  validate(h);
  if (!h.no_real_points)
    throw std::invalid_argument("coindex bounds need no_real_points");
  CitedBound out = detail::best_rule(detail::coindex_rules(), h);
  if (out.citation == "stably-complex-improved" && h.dimension == 2 && h.proper)
    out.note = "sharp: an Enriques surface with no real points has coindex 3";
  return out;
}

// Smallest level bound any single theorem row yields.  Always a power of 2.
inline CitedBound level_bound(const GeometricHypotheses& h) {
  validate(h);
  if (!h.no_real_points || !h.geometrically_irreducible || !h.smooth || !h.proper)
    throw std::invalid_argument(
        "level bounds need no_real_points, geometrically_irreducible, smooth, proper");
  if (h.dimension > 30)
    throw std::invalid_argument("dimension too large for an integer level bound");
  return detail::best_rule(detail::level_rules(), h);
}

}  // namespace gbu

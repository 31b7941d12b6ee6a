#pragma once
// The mod-2 Steenrod algebra A in the admissible-word basis, its Hopf
// structure (product, coproduct, antipode chi), its action on powers of w,
// and the twisted extension A~ = Z/2[w] (x) A whose product mixes the two
// factors through the coproduct.
//
// Words are sequences [i1, i2, ...] standing for Sq^{i1} Sq^{i2} ...;
// a word is admissible when i_j >= 2 i_{j+1} throughout.  Elements are F2
// sets of admissible words.

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gbu/gring.hpp"

namespace gbu {

using SqWord = std::vector<int>;

inline int word_degree(const SqWord& w) {
  return std::accumulate(w.begin(), w.end(), 0);
}

inline bool is_admissible(const SqWord& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i] < 2 * w[i + 1]) return false;
  return true;
}

// C(n, k) mod 2 by binary domination.
inline int lucas(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  return ((n & k) == k) ? 1 : 0;
}

// Display/storage order: degree descending, then lexicographically descending,
// so "Sq3" sorts before "Sq2 Sq1" and plain words before longer factorizations.
struct WordLess {
  bool operator()(const SqWord& a, const SqWord& b) const {
    int da = word_degree(a), db = word_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

// An element of A: canonically sorted F2 set of admissible words.
using SteenrodElement = std::vector<SqWord>;

namespace detail {

inline SteenrodElement word_set_xor(const SteenrodElement& a, const SteenrodElement& b) {
  SteenrodElement r;
  r.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(r), WordLess{});
  return r;
}

template <typename K, typename V, typename Compute>
V memoized(std::map<K, V>& cache, std::mutex& mu, const K& key, Compute compute) {
  {
    std::lock_guard lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  V value = compute();
  std::lock_guard lock(mu);
  return cache.emplace(key, std::move(value)).first->second;
}

}  // namespace detail

// Rewrites a word into its F2 sum of admissible words, eliminating the
// leftmost inadmissible pair Sq^a Sq^b (a < 2b) via
//   Sq^a Sq^b = sum_c C(b-c-1, a-2c) Sq^{a+b-c} Sq^c.
inline SteenrodElement adem_normalize(const SqWord& input) {
  static std::map<SqWord, SteenrodElement> cache;
  static std::mutex mu;

  SqWord w = input;
  std::erase(w, 0);  // Sq^0 is the unit
  for (int letter : w)
    if (letter < 0) throw std::invalid_argument("negative Sq index");
  if (is_admissible(w)) return {w};

  return detail::memoized(cache, mu, w, [&] {
    std::size_t p = 0;
    while (w[p] >= 2 * w[p + 1]) ++p;
    const int a = w[p], b = w[p + 1];
    SteenrodElement acc;
    for (int c = 0; 2 * c <= a; ++c) {
      if (!lucas(b - c - 1, a - 2 * c)) continue;
      SqWord next(w.begin(), w.begin() + p);
      next.push_back(a + b - c);
      if (c > 0) next.push_back(c);
      next.insert(next.end(), w.begin() + p + 2, w.end());
      acc = detail::word_set_xor(acc, adem_normalize(next));
    }
    return acc;
  });
}

inline SteenrodElement make_element(std::vector<SqWord> words) {
  SteenrodElement r;
  for (const auto& w : words) r = detail::word_set_xor(r, adem_normalize(w));
  return r;
}

inline SteenrodElement sq(int i) {
  if (i < 0) throw std::invalid_argument("negative Sq index");
  if (i == 0) return {SqWord{}};
  return {SqWord{i}};
}
inline SteenrodElement steenrod_unit() { return {SqWord{}}; }
inline SteenrodElement steenrod_zero() { return {}; }

inline SteenrodElement sum(const SteenrodElement& a, const SteenrodElement& b) {
  return detail::word_set_xor(a, b);
}

inline SteenrodElement product(const SteenrodElement& a, const SteenrodElement& b) {
  SteenrodElement r;
  for (const auto& u : a)
    for (const auto& v : b) {
      SqWord cat = u;
      cat.insert(cat.end(), v.begin(), v.end());
      r = detail::word_set_xor(r, adem_normalize(cat));
    }
  return r;
}

// ---------------------------------------------------------------------------
// Coproduct: psi(Sq^i) = sum_{j+k=i} Sq^j (x) Sq^k, extended multiplicatively.
// Pairs of admissible words, canonically sorted.
// ---------------------------------------------------------------------------

struct TensorLess {
  bool operator()(const std::pair<SqWord, SqWord>& a,
                  const std::pair<SqWord, SqWord>& b) const {
    WordLess less;
    if (a.first != b.first) return less(a.first, b.first);
    return less(a.second, b.second);
  }
};

using TensorElement = std::vector<std::pair<SqWord, SqWord>>;  // F2 set

inline TensorElement coproduct(const SteenrodElement& a) {
  TensorElement out;
  for (const auto& word : a) {
    TensorElement acc{{SqWord{}, SqWord{}}};
    for (int letter : word) {
      std::map<std::pair<SqWord, SqWord>, int, TensorLess> next;
      for (const auto& [l, r] : acc)
        for (int j = 0; j <= letter; ++j) {
          SqWord lw = l, rw = r;
          if (j) lw.push_back(j);
          if (letter - j) rw.push_back(letter - j);
          for (const auto& ln : adem_normalize(lw))
            for (const auto& rn : adem_normalize(rw)) next[{ln, rn}] ^= 1;
        }
      acc.clear();
      for (const auto& [pr, c] : next)
        if (c) acc.push_back(pr);
    }
    TensorElement merged;
    std::set_symmetric_difference(out.begin(), out.end(), acc.begin(), acc.end(),
                                  std::back_inserter(merged), TensorLess{});
    out = std::move(merged);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Antipode: chi(Sq^n) = sum_{i<n} chi(Sq^i) Sq^{n-i}, extended
// anti-multiplicatively; involutive.
// ---------------------------------------------------------------------------

inline SteenrodElement antipode_sq(int n) {
  static std::map<int, SteenrodElement> cache;
  static std::mutex mu;
  if (n < 0) throw std::invalid_argument("negative Sq index");
  if (n == 0) return steenrod_unit();
  return detail::memoized(cache, mu, n, [&] {
    SteenrodElement acc;
    for (int i = 0; i < n; ++i)
      acc = sum(acc, product(antipode_sq(i), sq(n - i)));
    return acc;
  });
}

inline SteenrodElement antipode(const SteenrodElement& a) {
  SteenrodElement r;
  for (const auto& word : a) {
    SteenrodElement term = steenrod_unit();
    for (int letter : word) term = product(antipode_sq(letter), term);
    r = detail::word_set_xor(r, term);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Action on Z/2[w]: Sq^i(w^j) = C(j, i) w^{i+j}, letters composing rightmost
// first.  A word sends w^j to at most one monomial.
// ---------------------------------------------------------------------------

inline bool word_on_omega(const SqWord& w, int j, int& out_exp) {
  if (j < 0) throw std::invalid_argument("negative omega exponent");
  int e = j;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (!lucas(e, *it)) return false;
    e += *it;
  }
  out_exp = e;
  return true;
}

// Image of w^j under an element, as a sorted exponent set.
inline std::vector<int> element_on_omega(const SteenrodElement& a, int j) {
  std::vector<int> exps;
  for (const auto& w : a) {
    int e;
    if (word_on_omega(w, j, e)) exps.push_back(e);
  }
  std::sort(exps.begin(), exps.end());
  std::vector<int> out;
  for (std::size_t i = 0; i < exps.size();) {
    std::size_t k = i;
    while (k < exps.size() && exps[k] == exps[i]) ++k;
    if ((k - i) & 1) out.push_back(exps[i]);
    i = k;
  }
  return out;
}

// ---------------------------------------------------------------------------
// The twisted algebra A~: F2 sets of terms w^a (x) word, with
//   (w^a (x) s)(w^b (x) t) = sum_i (w^a . s^(1)_i(w^b)) (x) s^(2)_i t.
// ---------------------------------------------------------------------------

using TwistedTerm = std::pair<int, SqWord>;  // (omega exponent, admissible word)

struct TwistedLess {
  bool operator()(const TwistedTerm& a, const TwistedTerm& b) const {
    if (a.first != b.first) return a.first < b.first;
    return WordLess{}(a.second, b.second);
  }
};

using TwistedElement = std::vector<TwistedTerm>;  // F2 set

inline TwistedElement twisted_xor(const TwistedElement& a, const TwistedElement& b) {
  TwistedElement r;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(r), TwistedLess{});
  return r;
}

inline TwistedElement make_twisted(int omega_exp, const SteenrodElement& a) {
  if (omega_exp < 0) throw std::invalid_argument("negative omega exponent");
  TwistedElement r;
  for (const auto& w : a) r = twisted_xor(r, {{omega_exp, w}});
  return r;
}

inline TwistedElement twisted_product(const TwistedElement& x, const TwistedElement& y) {
  TwistedElement out;
  for (const auto& [a, s] : x) {
    TensorElement psi = coproduct({s});
    for (const auto& [b, t] : y)
      for (const auto& [s1, s2] : psi) {
        int e;
        if (!word_on_omega(s1, b, e)) continue;
        SqWord cat = s2;
        cat.insert(cat.end(), t.begin(), t.end());
        for (const auto& w : adem_normalize(cat))
          out = twisted_xor(out, {{a + e, w}});
      }
  }
  return out;
}

// Antipode of A~: anti-multiplicative, fixes w, restricts to chi on A.
inline TwistedElement twisted_antipode(const TwistedElement& x) {
  TwistedElement out;
  for (const auto& [a, s] : x) {
    SteenrodElement chi_s = antipode({s});
    out = twisted_xor(out, twisted_product(make_twisted(0, chi_s),
                                           make_twisted(a, steenrod_unit())));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text form: terms joined by '+'; each term is an optional 'w^a' prefix
// followed by whitespace-separated 'Sq<i>' letters; '1' is the unit.
// Example: "Sq4 Sq2 + w^2 Sq1".
// ---------------------------------------------------------------------------

inline std::string to_string(const SqWord& w) {
  if (w.empty()) return "1";
  std::string s;
  for (int i : w) {
    if (!s.empty()) s += ' ';
    s += "Sq" + std::to_string(i);
  }
  return s;
}

inline std::string to_string(const SteenrodElement& a) {
  if (a.empty()) return "0";
  std::string s;
  for (const auto& w : a) {
    if (!s.empty()) s += " + ";
    s += to_string(w);
  }
  return s;
}

inline std::string to_string(const TwistedElement& x) {
  if (x.empty()) return "0";
  std::string s;
  for (const auto& [a, w] : x) {
    if (!s.empty()) s += " + ";
    std::string t;
    if (a == 1) t = "w";
    else if (a > 1) t = "w^" + std::to_string(a);
    if (!w.empty()) {
      if (!t.empty()) t += ' ';
      t += to_string(w);
    }
    s += t.empty() ? "1" : t;
  }
  return s;
}

inline std::string to_string(const TensorElement& t) {
  if (t.empty()) return "0";
  std::string s;
  for (const auto& [l, r] : t) {
    if (!s.empty()) s += " + ";
    s += to_string(l) + " (x) " + to_string(r);
  }
  return s;
}

inline TwistedElement parse_twisted(const std::string& text) {
  detail::Cursor c{text};
  if (c.eof()) c.fail("empty element");
  if (c.peek() == '0') {
    ++c.pos;
    if (!c.eof()) c.fail("unexpected input after 0");
    return {};
  }
  TwistedElement out;
  for (;;) {
    int omega_exp = 0;
    SqWord word;
    bool any = false;
    for (;;) {
      char p = c.peek();
      if (p == 'w') {
        ++c.pos;
        omega_exp += detail::optional_exponent(c);
        any = true;
      } else if (p == 'S') {
        if (c.src.compare(c.pos, 2, "Sq") != 0) c.fail("expected Sq");
        c.pos += 2;
        int i = c.integer();
        if (i <= 0) c.fail("Sq index must be positive");
        word.push_back(i);
        any = true;
      } else if (p == '1') {
        ++c.pos;
        any = true;
      } else {
        break;
      }
    }
    if (!any) c.fail("expected term");
    for (const auto& w : adem_normalize(word))
      out = twisted_xor(out, {{omega_exp, w}});
    if (c.eof()) break;
    if (c.peek() != '+') c.fail("expected '+'");
    ++c.pos;
    if (c.eof()) c.fail("trailing '+'");
  }
  return out;
}

inline SteenrodElement parse_steenrod(const std::string& text) {
  TwistedElement t = parse_twisted(text);
  SteenrodElement r;
  for (const auto& [a, w] : t) {
    if (a != 0) throw ParseError("omega prefix not allowed here", 0);
    r = detail::word_set_xor(r, {w});
  }
  return r;
}

}  // namespace gbu

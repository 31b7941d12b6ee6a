#pragma once
// Graded rings underlying the computation:
//   - PolyF2: the mod-2 ring Z/2[w, c1, c2, ...], truncated above a degree bound.
//     deg(w) = 1, deg(ci) = 2i.  Addition is symmetric difference of term sets.
//   - PolyZTwisted: the integral ring Z[w, (ci)]/(2w) with its twist grading
//     twist(w^e * prod ci^ei) = e + sum i*ei (mod 2).  Every monomial divisible
//     by w is 2-torsion; the w-free part is free.
// Monomials are stored sparsely with Chern exponents as (index, exp) pairs,
// index-ascending, exponents > 0.

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gbu {

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"),
        position(pos) {}
};

struct DegreeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Monomial {
  int omega = 0;                                // exponent of w
  std::vector<std::pair<int, int>> cherns;      // (i, exponent of ci), i ascending

  int degree() const {
    int d = omega;
    for (auto [i, e] : cherns) d += 2 * i * e;
    return d;
  }
  int chern_degree() const {
    int d = 0;
    for (auto [i, e] : cherns) d += i * e;
    return d;
  }
  // Parity of the twist grading on the integral ring.
  int twist() const { return (omega + chern_degree()) & 1; }
  bool is_one() const { return omega == 0 && cherns.empty(); }

  Monomial times(const Monomial& o) const {
    Monomial r;
    r.omega = omega + o.omega;
    r.cherns.reserve(cherns.size() + o.cherns.size());
    std::size_t a = 0, b = 0;
    while (a < cherns.size() || b < o.cherns.size()) {
      if (b == o.cherns.size() ||
          (a < cherns.size() && cherns[a].first < o.cherns[b].first)) {
        r.cherns.push_back(cherns[a++]);
      } else if (a == cherns.size() || o.cherns[b].first < cherns[a].first) {
        r.cherns.push_back(o.cherns[b++]);
      } else {
        r.cherns.emplace_back(cherns[a].first, cherns[a].second + o.cherns[b].second);
        ++a, ++b;
      }
    }
    return r;
  }

  Monomial squared() const {
    Monomial r = *this;
    r.omega *= 2;
    for (auto& [i, e] : r.cherns) e *= 2;
    return r;
  }

  bool operator==(const Monomial&) const = default;
};

// Canonical order: degree ascending, then omega exponent descending (so pure
// w-powers print first within a degree), then Chern exponents lexicographic.
inline bool monomial_less(const Monomial& a, const Monomial& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  if (a.omega != b.omega) return a.omega > b.omega;
  return a.cherns < b.cherns;
}

inline Monomial make_monomial(int omega_exp,
                              std::vector<std::pair<int, int>> cherns = {}) {
  Monomial m;
  m.omega = omega_exp;
  std::erase_if(cherns, [](auto& p) { return p.second == 0; });
  std::sort(cherns.begin(), cherns.end());
  for (std::size_t i = 0; i + 1 < cherns.size(); ++i)
    if (cherns[i].first == cherns[i + 1].first)
      throw std::invalid_argument("repeated chern index in monomial");
  m.cherns = std::move(cherns);
  return m;
}

// A polynomial over F2: a sorted set of monomials, with every monomial of
// degree above max_degree discarded.  All binary operations require equal
// max_degree and throw DegreeMismatch otherwise.
class PolyF2 {
 public:
  explicit PolyF2(int max_degree) : max_degree_(max_degree) {
    if (max_degree < 0) throw std::invalid_argument("negative degree bound");
  }
  PolyF2(int max_degree, std::vector<Monomial> terms) : PolyF2(max_degree) {
    std::erase_if(terms, [&](const Monomial& m) { return m.degree() > max_degree_; });
    std::sort(terms.begin(), terms.end(), monomial_less);
    // F2 semantics: pairs cancel.
    std::vector<Monomial> out;
    for (std::size_t i = 0; i < terms.size();) {
      std::size_t j = i;
      while (j < terms.size() && terms[j] == terms[i]) ++j;
      if ((j - i) & 1) out.push_back(terms[i]);
      i = j;
    }
    terms_ = std::move(out);
  }

  static PolyF2 zero(int max_degree) { return PolyF2(max_degree); }
  static PolyF2 one(int max_degree) { return PolyF2(max_degree, {Monomial{}}); }
  static PolyF2 omega(int max_degree, int e = 1) {
    return PolyF2(max_degree, {make_monomial(e)});
  }
  static PolyF2 chern(int max_degree, int i, int e = 1) {
    return PolyF2(max_degree, {make_monomial(0, {{i, e}})});
  }

  int max_degree() const { return max_degree_; }
  const std::vector<Monomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool contains(const Monomial& m) const {
    return std::binary_search(terms_.begin(), terms_.end(), m, monomial_less);
  }

  PolyF2 operator+(const PolyF2& o) const {
    check_bound(o);
    PolyF2 r(max_degree_);
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::set_symmetric_difference(terms_.begin(), terms_.end(), o.terms_.begin(),
                                  o.terms_.end(), std::back_inserter(r.terms_),
                                  monomial_less);
    return r;
  }
  PolyF2& operator+=(const PolyF2& o) { return *this = *this + o; }

  PolyF2 operator*(const PolyF2& o) const {
    check_bound(o);
    std::vector<Monomial> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) {
        Monomial m = a.times(b);
        if (m.degree() <= max_degree_) prod.push_back(std::move(m));
      }
    return PolyF2(max_degree_, std::move(prod));
  }
  PolyF2& operator*=(const PolyF2& o) { return *this = *this * o; }

  bool operator==(const PolyF2& o) const {
    return max_degree_ == o.max_degree_ && terms_ == o.terms_;
  }

  // Frobenius: squaring is additive in characteristic 2.
  PolyF2 frobenius() const {
    std::vector<Monomial> sq;
    sq.reserve(terms_.size());
    for (const auto& m : terms_) {
      Monomial s = m.squared();
      if (s.degree() <= max_degree_) sq.push_back(std::move(s));
    }
    return PolyF2(max_degree_, std::move(sq));
  }

  PolyF2 pow(int e) const {
    if (e < 0) throw std::invalid_argument("negative exponent");
    PolyF2 acc = one(max_degree_), base = *this;
    while (e) {
      if (e & 1) acc *= base;
      base = base.frobenius();
      e >>= 1;
    }
    return acc;
  }

  // Same set of terms under a different bound (truncating if it shrinks).
  PolyF2 with_max_degree(int new_bound) const {
    return PolyF2(new_bound, terms_);
  }

  // Homogeneous component of total degree k.
  PolyF2 component(int k) const {
    PolyF2 r(max_degree_);
    for (const auto& m : terms_)
      if (m.degree() == k) r.terms_.push_back(m);
    return r;
  }
  int min_positive_degree() const {
    for (const auto& m : terms_)
      if (m.degree() > 0) return m.degree();
    return -1;
  }
  bool is_homogeneous() const {
    for (const auto& m : terms_)
      if (m.degree() != terms_.front().degree()) return false;
    return true;
  }

  // Inverse of a series with constant term 1 (degreewise back-substitution).
  PolyF2 geometric_inverse() const {
    if (!contains(Monomial{}))
      throw std::invalid_argument("inverse requires constant term 1");
    PolyF2 u = *this + one(max_degree_);  // the nilpotent part
    PolyF2 inv = one(max_degree_);
    PolyF2 p = one(max_degree_);
    int step = u.min_positive_degree();
    if (step <= 0) return inv;
    for (int d = step; d <= max_degree_; d += step) {
      p *= u;
      if (p.is_zero()) break;
      inv += p;
    }
    return inv;
  }

 private:
  void check_bound(const PolyF2& o) const {
    if (max_degree_ != o.max_degree_)
      throw DegreeMismatch("degree bounds differ: " + std::to_string(max_degree_) +
                           " vs " + std::to_string(o.max_degree_));
  }
  int max_degree_;
  std::vector<Monomial> terms_;
};

// ---------------------------------------------------------------------------
// Text form.  Grammar (both directions):
//   poly     := '0' | term ('+' term)*
//   term     := '1' | factor (' ' factor)*
//   factor   := 'w' ['^' int] | 'c' int ['^' int]
// Example: "w^3 c1^2 c3 + w + 1".
// ---------------------------------------------------------------------------

inline std::string to_string(const Monomial& m) {
  if (m.is_one()) return "1";
  std::string s;
  auto app = [&](const std::string& f) {
    if (!s.empty()) s += ' ';
    s += f;
  };
  if (m.omega == 1) app("w");
  else if (m.omega > 1) app("w^" + std::to_string(m.omega));
  for (auto [i, e] : m.cherns) {
    std::string f = "c" + std::to_string(i);
    if (e > 1) f += "^" + std::to_string(e);
    app(f);
  }
  return s;
}

inline std::string to_string(const PolyF2& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (const auto& m : p.terms()) {
    if (!s.empty()) s += " + ";
    s += to_string(m);
  }
  return s;
}

inline std::ostream& operator<<(std::ostream& os, const PolyF2& p) {
  return os << to_string(p);
}

namespace detail {

struct Cursor {
  const std::string& src;
  std::size_t pos = 0;
  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos); }
  int integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos == start) fail("expected integer");
    if (pos - start > 9) fail("integer too large");
    return std::stoi(src.substr(start, pos - start));
  }
};

inline int optional_exponent(Cursor& c) {
  // whitespace is a factor separator; '^' must be adjacent
  if (c.pos < c.src.size() && c.src[c.pos] == '^') {
    ++c.pos;
    int e = c.integer();
    if (e <= 0) c.fail("exponent must be positive");
    return e;
  }
  return 1;
}

inline Monomial parse_term(Cursor& c) {
  Monomial m;
  std::map<int, int> ch;
  bool any = false;
  for (;;) {
    char p = c.peek();
    if (p == 'w') {
      ++c.pos;
      m.omega += optional_exponent(c);
      any = true;
    } else if (p == 'c') {
      ++c.pos;
      int i = c.integer();
      if (i <= 0) c.fail("chern index must be positive");
      ch[i] += optional_exponent(c);
      any = true;
    } else if (p == '1') {
      ++c.pos;
      any = true;
    } else {
      break;
    }
  }
  if (!any) c.fail("expected monomial");
  m.cherns.assign(ch.begin(), ch.end());
  return m;
}

}  // namespace detail

inline PolyF2 parse_poly(const std::string& text, int max_degree) {
  detail::Cursor c{text};
  if (c.eof()) c.fail("empty polynomial");
  std::vector<Monomial> terms;
  if (c.peek() == '0') {
    ++c.pos;
    if (!c.eof()) c.fail("unexpected input after 0");
    return PolyF2::zero(max_degree);
  }
  for (;;) {
    Monomial m = detail::parse_term(c);
    if (m.degree() > max_degree)
      throw ParseError("monomial degree " + std::to_string(m.degree()) +
                           " exceeds bound " + std::to_string(max_degree),
                       c.pos);
    terms.push_back(std::move(m));
    if (c.eof()) break;
    if (c.peek() != '+') c.fail("expected '+'");
    ++c.pos;
    if (c.eof()) c.fail("trailing '+'");
  }
  return PolyF2(max_degree, std::move(terms));
}

// ---------------------------------------------------------------------------
// The integral ring Z[w, (ci)]/(2w) with the twist grading.  Elements split as
// a free part (w-free monomials, integer coefficients) plus a 2-torsion part
// (monomials with w-exponent >= 1, F2 coefficients).
// ---------------------------------------------------------------------------

class PolyZTwisted {
 public:
  explicit PolyZTwisted(int max_degree)
      : max_degree_(max_degree), torsion_(max_degree) {}

  static PolyZTwisted zero(int max_degree) { return PolyZTwisted(max_degree); }

  int max_degree() const { return max_degree_; }
  const std::map<Monomial, long long, decltype(&monomial_less)>& free_part() const {
    return free_;
  }
  const PolyF2& torsion_part() const { return torsion_; }
  bool is_zero() const { return free_.empty() && torsion_.is_zero(); }

  void add_free(const Monomial& m, long long coeff) {
    if (m.omega != 0) throw std::invalid_argument("free part must be w-free");
    if (m.degree() > max_degree_ || coeff == 0) return;
    auto it = free_.try_emplace(m, 0).first;
    it->second += coeff;
    if (it->second == 0) free_.erase(it);
  }
  void add_torsion(const Monomial& m) {
    if (m.omega == 0) throw std::invalid_argument("torsion part must be divisible by w");
    torsion_ += PolyF2(max_degree_, {m});
  }
  void add_torsion(const PolyF2& p) {
    for (const auto& m : p.terms())
      if (m.omega == 0) throw std::invalid_argument("torsion part must be divisible by w");
    torsion_ += p;
  }

  PolyZTwisted operator+(const PolyZTwisted& o) const {
    if (max_degree_ != o.max_degree_) throw DegreeMismatch("degree bounds differ");
    PolyZTwisted r = *this;
    for (const auto& [m, c] : o.free_) r.add_free(m, c);
    r.torsion_ += o.torsion_;
    return r;
  }

  PolyZTwisted scale(long long k) const {
    PolyZTwisted r(max_degree_);
    for (const auto& [m, c] : free_) r.add_free(m, c * k);
    if (k & 1) r.torsion_ = torsion_;  // 2-torsion dies under even scaling
    return r;
  }

  // Terms of total degree k and twist parity j (mod 2).
  PolyZTwisted slice(int k, int j) const {
    PolyZTwisted r(max_degree_);
    for (const auto& [m, c] : free_)
      if (m.degree() == k && m.twist() == (j & 1)) r.add_free(m, c);
    for (const auto& m : torsion_.terms())
      if (m.degree() == k && m.twist() == (j & 1)) r.add_torsion(m);
    return r;
  }

  PolyF2 reduce_mod2() const {
    PolyF2 r = torsion_;
    for (const auto& [m, c] : free_)
      if (c & 1) r += PolyF2(max_degree_, {m});
    return r;
  }

  bool operator==(const PolyZTwisted& o) const {
    return max_degree_ == o.max_degree_ && free_ == o.free_ && torsion_ == o.torsion_;
  }

 private:
  int max_degree_;
  std::map<Monomial, long long, decltype(&monomial_less)> free_{&monomial_less};
  PolyF2 torsion_;
};

// Integral Bockstein for the twisted coefficient sheaf indexed by j: a mod-2
// monomial of twist parity == j maps to zero (it lifts), and every other
// monomial maps to the 2-torsion class w * m.
inline PolyZTwisted bockstein(int j, const PolyF2& x) {
  PolyZTwisted r(x.max_degree());
  const Monomial w = make_monomial(1);
  for (const auto& m : x.terms()) {
    if (m.twist() == (j & 1)) continue;
    Monomial t = w.times(m);
    if (t.degree() <= x.max_degree()) r.add_torsion(t);
  }
  return r;
}

}  // namespace gbu

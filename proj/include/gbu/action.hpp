#pragma once
// Left action of the Steenrod algebra on Z/2[w, c1, c2, ...] through a
// Chern-root splitting engine.  Generator rules:
//   Sq(w)  = w + w^2
//   Sq(y)  = y + w y + y^2        on each root y (degree 2),
// extended multiplicatively (Cartan).  chi(Sq) is the degreewise inverse of
// the unipotent operator Sq.
//
// Symmetric polynomials in the roots are never expanded monomially: RootPoly
// stores F2 coefficients on orbits (w-power, partition), where the partition
// lists root exponents.  The orbit sum m_lambda over a partition lambda is
// the monomial symmetric function; c_k corresponds to e_k = m_{(1^k)}, and
// products are computed by a Pieri-type rule for m_mu * e_k.

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gbu/gring.hpp"
#include "gbu/steenrod.hpp"

namespace gbu {

using Partition = std::vector<int>;  // weakly decreasing, entries >= 1

inline int partition_weight(const Partition& p) {
  int w = 0;
  for (int x : p) w += x;
  return w;
}

inline Partition conjugate(const Partition& p) {
  Partition c;
  if (p.empty()) return c;
  c.resize(p[0], 0);
  for (int part : p)
    for (int j = 0; j < part; ++j) ++c[j];
  return c;
}

struct OrbitKey {
  int omega = 0;
  Partition parts;
  int degree() const { return omega + 2 * partition_weight(parts); }
  bool operator==(const OrbitKey&) const = default;
  bool operator<(const OrbitKey& o) const {
    if (omega != o.omega) return omega < o.omega;
    return parts < o.parts;
  }
};

class RootPoly {
 public:
  RootPoly(int root_count, int max_degree)
      : root_count_(root_count), max_degree_(max_degree) {
    if (root_count < max_degree / 2)
      throw std::invalid_argument("root count too small for degree bound");
  }

  int root_count() const { return root_count_; }
  int max_degree() const { return max_degree_; }
  const std::set<OrbitKey>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const RootPoly& o) const {
    return root_count_ == o.root_count_ && max_degree_ == o.max_degree_ &&
           terms_ == o.terms_;
  }

  void toggle(OrbitKey k) {
    if (static_cast<int>(k.parts.size()) > root_count_ || k.degree() > max_degree_)
      return;
    auto [it, inserted] = terms_.insert(std::move(k));
    if (!inserted) terms_.erase(it);
  }

  RootPoly times_omega(int e) const {
    RootPoly r(root_count_, max_degree_);
    for (const auto& k : terms_) r.toggle({k.omega + e, k.parts});
    return r;
  }

  // Pieri-type product with the elementary symmetric e_k: for each orbit,
  // distribute k unit increments over the value classes of the partition
  // (the zero class has multiplicity root_count - length); the multiplicity
  // of a target orbit is a product of binomials, reduced by Lucas.
  RootPoly times_e(int k) const {
    RootPoly r(root_count_, max_degree_);
    if (k == 0) return *this;
    if (k < 0 || k > root_count_) return r;
    for (const auto& key : terms_) {
      // value classes, descending values; the implicit zero class last
      std::vector<std::pair<int, int>> classes;  // (value, count)
      for (int part : key.parts) {
        if (!classes.empty() && classes.back().first == part)
          ++classes.back().second;
        else
          classes.emplace_back(part, 1);
      }
      classes.emplace_back(0, root_count_ - static_cast<int>(key.parts.size()));
      std::vector<int> t(classes.size(), 0);
      enumerate(key, classes, t, 0, k, r);
    }
    return r;
  }

  PolyF2 to_poly() const;

  static RootPoly from_poly(const PolyF2& p, int root_count);
  static RootPoly from_raw_monomials(int root_count, int max_degree,
                                     const std::vector<std::pair<int, std::vector<int>>>& monomials);

 private:
  void enumerate(const OrbitKey& key, const std::vector<std::pair<int, int>>& classes,
                 std::vector<int>& t, std::size_t ci, int remaining,
                 RootPoly& out) const {
    if (ci == classes.size()) {
      if (remaining) return;
      // target class counts: value v keeps (count - t) members, gains the
      // incremented members of the class with value v-1
      std::map<int, int, std::greater<int>> counts;
      for (std::size_t i = 0; i < classes.size(); ++i) {
        auto [v, n] = classes[i];
        if (n - t[i] > 0 && v > 0) counts[v] += n - t[i];
        if (t[i] > 0) counts[v + 1] += t[i];
      }
      int coeff = 1;
      for (std::size_t i = 0; i < classes.size() && coeff; ++i)
        if (t[i] > 0) coeff &= lucas(counts[classes[i].first + 1], t[i]);
      if (!coeff) return;
      Partition target;
      for (auto [v, n] : counts) target.insert(target.end(), n, v);
      out.toggle({key.omega, std::move(target)});
      return;
    }
    int cap = std::min(classes[ci].second, remaining);
    for (int take = 0; take <= cap; ++take) {
      t[ci] = take;
      enumerate(key, classes, t, ci + 1, remaining - take, out);
    }
    t[ci] = 0;
  }

  int root_count_;
  int max_degree_;
  std::set<OrbitKey> terms_;
};

namespace detail {

// Expansion of the product e_{mu_1} e_{mu_2} ... for a partition mu, within
// the given truncation; cached per call site via the supplied map.
inline const RootPoly& e_monomial(const Partition& mu, int root_count, int max_degree,
                                  std::map<Partition, RootPoly>& cache) {
  auto it = cache.find(mu);
  if (it != cache.end()) return it->second;
  RootPoly acc(root_count, max_degree);
  acc.toggle({0, {}});
  for (int part : mu) acc = acc.times_e(part);
  return cache.emplace(mu, std::move(acc)).first->second;
}

}  // namespace detail

inline RootPoly RootPoly::from_poly(const PolyF2& p, int root_count) {
  RootPoly r(root_count, p.max_degree());
  std::map<Partition, RootPoly> cache;
  for (const auto& m : p.terms()) {
    // the exponent-sorted Chern indices form the conjugate shape of the
    // leading orbit; expand prod_i e_i^{e_i}
    Partition mu;
    for (auto [i, e] : m.cherns) mu.insert(mu.end(), e, i);
    std::sort(mu.begin(), mu.end(), std::greater<int>());
    const RootPoly& exp = detail::e_monomial(mu, root_count, p.max_degree(), cache);
    for (const auto& k : exp.terms()) r.toggle({k.omega + m.omega, k.parts});
  }
  return r;
}

inline PolyF2 RootPoly::to_poly() const {
  // Greedy elimination: within each (w-power, weight) slice the lex-greatest
  // orbit is the leading term of the e-monomial indexed by its conjugate, and
  // every correction the expansion introduces is lexicographically smaller.
  std::map<Partition, RootPoly> cache;
  std::map<std::pair<int, int>, std::set<Partition>> slices;
  for (const auto& k : terms_)
    slices[{k.omega, partition_weight(k.parts)}].insert(k.parts);
  std::vector<Monomial> out;
  for (auto& [ow, slice] : slices) {
    auto [omega, weight] = ow;
    std::set<Partition>& live = slice;
    while (!live.empty()) {
      Partition lambda = *live.rbegin();
      Partition conj = conjugate(lambda);
      std::vector<std::pair<int, int>> cherns;
      for (int idx : conj) {
        if (!cherns.empty() && cherns.back().first == idx)
          ++cherns.back().second;
        else
          cherns.emplace_back(idx, 1);
      }
      std::reverse(cherns.begin(), cherns.end());
      out.push_back(make_monomial(omega, cherns));
      for (const auto& k : detail::e_monomial(conj, root_count_, max_degree_, cache).terms()) {
        if (partition_weight(k.parts) != weight) continue;  // truncation guard
        auto it = live.find(k.parts);
        if (it != live.end()) live.erase(it);
        else live.insert(k.parts);
      }
    }
  }
  return PolyF2(max_degree_, std::move(out));
}

inline RootPoly RootPoly::from_raw_monomials(
    int root_count, int max_degree,
    const std::vector<std::pair<int, std::vector<int>>>& monomials) {
  // testing/oracle path: verify orbit-completeness, then collapse to orbits
  std::map<std::pair<int, std::vector<int>>, int> parity;
  for (const auto& [omega, exps] : monomials) {
    if (static_cast<int>(exps.size()) != root_count)
      throw std::invalid_argument("exponent vector length must equal root count");
    int deg = omega;
    for (int e : exps) deg += 2 * e;
    if (deg > max_degree) continue;
    parity[{omega, exps}] ^= 1;
  }
  std::map<OrbitKey, unsigned long long> present;
  for (const auto& [key, par] : parity) {
    if (!par) continue;
    Partition sorted(key.second.begin(), key.second.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<int>());
    while (!sorted.empty() && sorted.back() == 0) sorted.pop_back();
    ++present[{key.first, sorted}];
  }
  RootPoly r(root_count, max_degree);
  for (const auto& [k, count] : present) {
    // orbit size: multinomial over value multiplicities, zeros included
    unsigned long long size = 1, used = 0;
    std::map<int, int> mult;
    for (int part : k.parts) ++mult[part];
    mult[0] += root_count - static_cast<int>(k.parts.size());
    for (auto [v, n] : mult)
      for (int j = 1; j <= n; ++j) size = size * (++used) / j;
    if (count != size) {
      std::string orbit = "w^" + std::to_string(k.omega) + " * m_(";
      for (std::size_t i = 0; i < k.parts.size(); ++i)
        orbit += (i ? "," : "") + std::to_string(k.parts[i]);
      throw std::invalid_argument("input not symmetric: orbit " + orbit +
                                  ") has " + std::to_string(count) + " of " +
                                  std::to_string(size) + " members");
    }
    r.toggle(k);
  }
  return r;
}

inline RootPoly to_roots(const PolyF2& p, int root_count) {
  return RootPoly::from_poly(p, root_count);
}
inline PolyF2 from_roots(const RootPoly& q) { return q.to_poly(); }

// ---------------------------------------------------------------------------
// Total Steenrod square on PolyF2, multiplicative over monomial factors with
// cached generator images Sq(c_i) obtained from the root engine:
//   Sq(e_i) = sum_{u<=i} (1+w)^{i-u} m_{(2^u 1^{i-u})}.
// ---------------------------------------------------------------------------

inline PolyF2 sq_chern_image(int i, int max_degree) {
  static std::map<std::pair<int, int>, PolyF2> cache;
  static std::mutex mu;
  return detail::memoized(cache, mu, {i, max_degree}, [&] {
    int roots = std::max(i, max_degree / 2);
    RootPoly acc(roots, max_degree);
    for (int u = 0; u <= i; ++u) {
      Partition shape;
      shape.insert(shape.end(), u, 2);
      shape.insert(shape.end(), i - u, 1);
      for (int b = 0; b <= i - u; ++b)
        if (lucas(i - u, b)) acc.toggle({b, shape});
    }
    return acc.to_poly();
  });
}

inline PolyF2 sq_total(const PolyF2& p) {
  const int maxd = p.max_degree();
  PolyF2 out(maxd);
  const PolyF2 sq_omega = PolyF2::omega(maxd) + PolyF2::omega(maxd, 2);
  for (const auto& m : p.terms()) {
    PolyF2 acc = m.omega ? sq_omega.pow(m.omega) : PolyF2::one(maxd);
    for (auto [i, e] : m.cherns) acc *= sq_chern_image(i, maxd).pow(e);
    out += acc;
  }
  return out;
}

// Single operation Sq^i, extended additively over homogeneous components.
inline PolyF2 sq(int i, const PolyF2& p) {
  if (i < 0) throw std::invalid_argument("negative Sq index");
  PolyF2 out(p.max_degree());
  for (int d = 0; d <= p.max_degree(); ++d) {
    PolyF2 slice = p.component(d);
    if (slice.is_zero()) continue;
    if (d + i > p.max_degree()) continue;
    out += sq_total(slice).component(d + i);
  }
  return out;
}

// chi(Sq): the degreewise inverse of sq_total.  Solves Sq(q) = p for q by
// ascending degree: q_d = p_d + sum_{d' < d} [Sq(q_{d'})]_d.
inline PolyF2 chi_sq_total(const PolyF2& p) {
  const int maxd = p.max_degree();
  PolyF2 q(maxd);
  std::vector<PolyF2> corrections(maxd + 1, PolyF2(maxd));  // [Sq(q_{<d})]_d
  for (int d = 0; d <= maxd; ++d) {
    PolyF2 qd = p.component(d) + corrections[d];
    if (qd.is_zero()) continue;
    q += qd;
    PolyF2 image = sq_total(qd);
    for (int d2 = d + 1; d2 <= maxd; ++d2) corrections[d2] += image.component(d2);
  }
  return q;
}

// Word and element action; letters compose rightmost first.
inline PolyF2 act(const SqWord& word, const PolyF2& p) {
  PolyF2 out = p;
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = sq(*it, out);
  return out;
}

inline PolyF2 act(const SteenrodElement& a, const PolyF2& p) {
  PolyF2 out(p.max_degree());
  for (const auto& w : a) out += act(w, p);
  return out;
}

inline PolyF2 act(const TwistedElement& x, const PolyF2& p) {
  PolyF2 out(p.max_degree());
  for (const auto& [a, w] : x) {
    PolyF2 img = act(w, p);
    if (a) img *= PolyF2::omega(p.max_degree(), a);
    out += img;
  }
  return out;
}

}  // namespace gbu

#pragma once
// Characteristic-class formulas:
//   - w_from_c:  w(E) = sum_i c_i(E) (1+w)^{rank-i}   (SW classes from Chern)
//   - wu_u:      u(E) = chi(Sq)(w(E))                  (total Wu class)
//   - todd_t:    the mod-2 multiplicative sequence t_m with characteristic
//                series q(x) = 1 + sum_l x^{2^l}
//   - wu_formula: v = sum_m Q^{n-2m} t_m(c),  Q = q(w)  (Wu class of the
//                rank-n universal object, depending on the dimension n)
//   - coeff_N(n,k): coefficient of x^k in q(x)^n, the w-power coefficients
//                of the v_k.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gbu/action.hpp"
#include "gbu/gring.hpp"

namespace gbu {

struct VirtualBundle {
  int rank = 0;           // possibly negative
  PolyF2 total_chern;     // constant term 1; even-degree Chern monomials only

  VirtualBundle(int r, PolyF2 c) : rank(r), total_chern(std::move(c)) {
    if (!total_chern.contains(Monomial{}))
      throw std::invalid_argument("total chern class needs constant term 1");
    for (const auto& m : total_chern.terms())
      if (m.omega != 0)
        throw std::invalid_argument("total chern class must not involve w");
  }
};

// Generic total Chern class 1 + c1 + c2 + ... up to the degree bound.
inline PolyF2 generic_chern(int max_degree, int max_index = -1) {
  if (max_index < 0) max_index = max_degree / 2;
  PolyF2 c = PolyF2::one(max_degree);
  for (int i = 1; 2 * i <= max_degree && i <= max_index; ++i)
    c += PolyF2::chern(max_degree, i);
  return c;
}

inline PolyF2 w_from_c(const VirtualBundle& b) {
  const int maxd = b.total_chern.max_degree();
  const PolyF2 one_plus_w = PolyF2::one(maxd) + PolyF2::omega(maxd);
  const PolyF2 inv = one_plus_w.geometric_inverse();
  PolyF2 out(maxd);
  for (int i = 0; 2 * i <= maxd; ++i) {
    PolyF2 ci = b.total_chern.component(2 * i);
    if (ci.is_zero()) continue;
    int e = b.rank - i;
    out += ci * (e >= 0 ? one_plus_w.pow(e) : inv.pow(-e));
  }
  return out;
}

inline PolyF2 wu_u(const VirtualBundle& b) { return chi_sq_total(w_from_c(b)); }

// The series q(x) evaluated at w: 1 + w + w^2 + w^4 + w^8 + ...
inline PolyF2 q_series(int max_degree) {
  PolyF2 s = PolyF2::one(max_degree);
  for (long long p = 1; p <= max_degree; p *= 2)
    s += PolyF2::omega(max_degree, static_cast<int>(p));
  return s;
}

// t_m: the degree-2m part of prod_i q(y_i), i.e. the orbit sum over all
// partitions of m with parts powers of two, rewritten in the c-basis.
inline PolyF2 todd_t(int m, int max_degree = -1) {
  if (m < 0) throw std::invalid_argument("negative index");
  if (max_degree < 0) max_degree = 2 * m;
  if (2 * m > max_degree) return PolyF2::zero(max_degree);
  const int roots = std::max(m, max_degree / 2);
  RootPoly acc(roots, 2 * m);
  Partition parts;
  // descending power-of-two partitions of m
  auto rec = [&](auto&& self, int remaining, int cap) -> void {
    if (remaining == 0) {
      Partition p = parts;
      acc.toggle({0, std::move(p)});
      return;
    }
    int p2 = 1;
    while (2 * p2 <= std::min(remaining, cap)) p2 *= 2;
    for (; p2 >= 1; p2 /= 2) {
      parts.push_back(p2);
      self(self, remaining - p2, p2);
      parts.pop_back();
    }
  };
  rec(rec, m, m);
  return from_roots(acc).with_max_degree(max_degree);
}

// v = sum_m Q^{n-2m} t_m(c), truncated; negative powers of the unipotent
// series Q through geometric inversion.
inline PolyF2 wu_formula(int n, int max_degree) {
  if (n < 0) throw std::invalid_argument("negative dimension");
  const PolyF2 q = q_series(max_degree);
  const PolyF2 qinv = q.geometric_inverse();
  PolyF2 v(max_degree);
  for (int m = 0; 2 * m <= max_degree; ++m) {
    PolyF2 tm = todd_t(m, max_degree);
    if (tm.is_zero()) continue;
    int e = n - 2 * m;
    v += tm * (e >= 0 ? q.pow(e) : qinv.pow(-e));
  }
  return v;
}

// Coefficient of x^k in q(x)^n over F2; bit-packed series exponentiation.
inline int coeff_N(long long n, long long k) {
  if (n < 0 || k < 0) return 0;
  const std::size_t words = static_cast<std::size_t>(k / 64 + 1);
  using Bits = std::vector<std::uint64_t>;
  auto get = [&](const Bits& a, long long i) -> int {
    return (a[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1;
  };
  auto mul = [&](const Bits& a, const Bits& b) {
    Bits r(words, 0);
    for (long long i = 0; i <= k; ++i) {
      if (!get(a, i)) continue;
      // r ^= b << i, truncated at bit k
      const long long word_shift = i / 64, bit_shift = i % 64;
      for (std::size_t w = 0; w + word_shift < words; ++w) {
        std::uint64_t lo = b[w] << bit_shift;
        r[w + word_shift] ^= lo;
        if (bit_shift && w + word_shift + 1 < words)
          r[w + word_shift + 1] ^= b[w] >> (64 - bit_shift);
      }
    }
    if (long long top = k % 64 + 1; top < 64)
      r[words - 1] &= (std::uint64_t(1) << top) - 1;
    return r;
  };
  Bits base(words, 0), acc(words, 0);
  base[0] = 1;
  for (long long p = 1; p <= k; p *= 2)
    base[static_cast<std::size_t>(p / 64)] ^= std::uint64_t(1) << (p % 64);
  acc[0] = 1;
  unsigned long long e = static_cast<unsigned long long>(n);
  while (e) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return get(acc, k);
}

struct WuContext {
  int n;       // working dimension
  PolyF2 v;    // total Wu class, truncated at v.max_degree()

  WuContext(int dim, PolyF2 wu) : n(dim), v(std::move(wu)) {
    if (!v.contains(Monomial{}))
      throw std::invalid_argument("total Wu class needs constant term 1");
  }
};

inline WuContext make_wu_context(int n, int max_degree) {
  return WuContext(n, wu_formula(n, max_degree));
}

}  // namespace gbu

#pragma once
// Dimension-dependent right action of the twisted Steenrod algebra on
// Z/2[w, (ci)]:  with v the total Wu class for dimension n,
//   (x)Sq      = v . chi(Sq)(x)            (total right operation)
//   (x)Sq^i    = degree (deg x + i) part
//   (x)chi(Sq) = w(-kappa) . Sq(x)         (inverse total operation)
// and words act letterwise from the left: (x)(Sq^a Sq^b) = ((x)Sq^a)Sq^b.
// A w-power prefix multiplies before the word acts.

#include <stdexcept>

#include "gbu/action.hpp"
#include "gbu/charclass.hpp"
#include "gbu/gring.hpp"
#include "gbu/steenrod.hpp"

namespace gbu {

inline PolyF2 right_sq_total(const WuContext& ctx, const PolyF2& x) {
  return ctx.v * chi_sq_total(x);
}

inline PolyF2 right_sq(const WuContext& ctx, const PolyF2& x, int i) {
  if (i < 0) throw std::invalid_argument("negative Sq index");
  if (x.is_zero()) return x;
  if (!x.is_homogeneous())
    throw std::invalid_argument("right Sq^i needs a homogeneous argument");
  const int d = x.terms().front().degree();
  if (d + i > x.max_degree())
    throw std::out_of_range("requested degree " + std::to_string(d + i) +
                            " beyond bound " + std::to_string(x.max_degree()));
  return right_sq_total(ctx, x).component(d + i);
}

// Right action of a single w^a (x) word term: multiply by w^a, then apply the
// letters left to right, summing total-operation components degreewise.  The
// letterwise form (x)Sq^i is only defined for homogeneous x; inhomogeneous
// inputs are handled additively per component.
inline PolyF2 right_act_word(const WuContext& ctx, const PolyF2& x, const SqWord& word) {
  PolyF2 acc = x;
  for (int letter : word) {
    PolyF2 next(acc.max_degree());
    for (int d = 0; d <= acc.max_degree(); ++d) {
      PolyF2 slice = acc.component(d);
      if (slice.is_zero() || d + letter > acc.max_degree()) continue;
      next += right_sq(ctx, slice, letter);
    }
    acc = next;
  }
  return acc;
}

inline PolyF2 right_apply(const WuContext& ctx, const PolyF2& x, const TwistedElement& a) {
  PolyF2 out(x.max_degree());
  for (const auto& [omega_exp, word] : a) {
    PolyF2 moved = omega_exp ? x * PolyF2::omega(x.max_degree(), omega_exp) : x;
    out += right_act_word(ctx, moved, word);
  }
  return out;
}

inline PolyF2 right_apply(const WuContext& ctx, const PolyF2& x, const SteenrodElement& a) {
  PolyF2 out(x.max_degree());
  for (const auto& word : a) out += right_act_word(ctx, x, word);
  return out;
}

// Total SW class of the formal inverse of the rank-n universal object.
inline PolyF2 inverse_universal_w(int n, int max_degree) {
  VirtualBundle minus{-n, generic_chern(max_degree).geometric_inverse()};
  return w_from_c(minus);
}

inline PolyF2 right_chi_sq_total(const WuContext& ctx, const PolyF2& x) {
  return inverse_universal_w(ctx.n, x.max_degree()) * sq_total(x);
}

}  // namespace gbu

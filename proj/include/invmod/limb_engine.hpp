#ifndef INVMOD_LIMB_ENGINE_HPP
#define INVMOD_LIMB_ENGINE_HPP

// Uninstrumented inverses modulo 2^m on raw limb buffers. Same steps, same
// order and same operand widths as the counted code in lifting.hpp; only
// the per-operation bookkeeping (allocation, counting, step events) is
// gone. The lifting entry points route here when counting is off.

#include "invmod/arith.hpp"
#include "invmod/bignat.hpp"
#include "invmod/thresholds.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <vector>

namespace invmod::detail::limb {

using Limb = mp_limb_t;
inline constexpr std::size_t kLimbBits = GMP_NUMB_BITS;

inline std::size_t limbs_for(std::size_t bits) { return (bits + kLimbBits - 1) / kLimbBits; }

/// Clears bits >= `bits` in the top limb of a limbs_for(bits) buffer.
inline void trim(Limb* p, std::size_t bits) {
  const std::size_t rem = bits % kLimbBits;
  if (rem != 0) p[bits / kLimbBits] &= (Limb{1} << rem) - 1;
}

inline void zero(Limb* p, std::size_t n) { std::fill_n(p, n, Limb{0}); }

/// 2^bits - 1 for bits <= 64.
inline Limb low_mask(std::size_t bits) { return bits >= kLimbBits ? ~Limb{0} : (Limb{1} << bits) - 1; }

/// rp[0, nx + ny) = x * y. High zero limbs of the inputs are skipped.
inline void mul(Limb* rp, const Limb* xp, std::size_t nx, const Limb* yp, std::size_t ny) {
  const std::size_t total = nx + ny;
  while (nx > 0 && xp[nx - 1] == 0) --nx;
  while (ny > 0 && yp[ny - 1] == 0) --ny;
  if (nx == 0 || ny == 0) {
    zero(rp, total);
    return;
  }
  if (nx == 1 && ny == 1) {
    const unsigned __int128 prod = static_cast<unsigned __int128>(xp[0]) * yp[0];
    rp[0] = static_cast<Limb>(prod);
    rp[1] = static_cast<Limb>(prod >> 64);
    zero(rp + 2, total - 2);
    return;
  }
  multiply_limbs(rp, xp, static_cast<mp_size_t>(nx), yp, static_cast<mp_size_t>(ny));
  zero(rp + nx + ny, total - nx - ny);
}

/// dst[0, limbs_for(width)) = (src >> offset) mod 2^width; src has src_n limbs.
inline void extract(Limb* dst, const Limb* src, std::size_t src_n, std::size_t offset, std::size_t width) {
  const std::size_t wl = limbs_for(width);
  const std::size_t start = offset / kLimbBits;
  const unsigned shift = static_cast<unsigned>(offset % kLimbBits);
  const std::size_t avail = start < src_n ? src_n - start : 0;
  const std::size_t take = std::min(wl, avail);
  if (shift == 0) {
    std::copy_n(src + start, take, dst);
  } else if (take > 0) {
    mpn_rshift(dst, src + start, static_cast<mp_size_t>(take), shift);
    if (avail > take) dst[take - 1] |= src[start + take] << (kLimbBits - shift);
  }
  zero(dst + take, wl - take);
  trim(dst, width);
}

/// dst |= src << offset, src a trimmed `width`-bit value.
inline void deposit(Limb* dst, const Limb* src, std::size_t width, std::size_t offset) {
  const std::size_t sl = limbs_for(width);
  const std::size_t start = offset / kLimbBits;
  const unsigned shift = static_cast<unsigned>(offset % kLimbBits);
  if (shift == 0) {
    mpn_ior_n(dst + start, dst + start, src, static_cast<mp_size_t>(sl));
    return;
  }
  const std::size_t dl = limbs_for(offset + width);
  for (std::size_t i = 0; i < sl; ++i) {
    dst[start + i] |= src[i] << shift;
    if (start + i + 1 < dl) dst[start + i + 1] |= src[i] >> (kLimbBits - shift);
  }
}

/// Buffers for one call; `a` holds the operand, `r` the running inverse.
struct Workspace {
  std::vector<Limb> a, r, s, t1, t2, p;
  std::size_t n = 0;

  void load(const BigNat& value, std::size_t m) {
    n = limbs_for(m);
    auto fit = [](std::vector<Limb>& v, std::size_t size) {
      if (v.size() < size) v.resize(size);
    };
    fit(a, n);
    fit(r, 2 * n + 2);
    fit(s, 2 * n + 2);
    fit(t1, 2 * n + 2);
    fit(t2, 2 * n + 2);
    fit(p, 4 * n + 4);
    const mpz_srcptr src = value.get_mpz_t();
    const std::size_t have = std::min(n, static_cast<std::size_t>(mpz_size(src)));
    std::copy_n(mpz_limbs_read(src), have, a.data());
    zero(a.data() + have, n - have);
    trim(a.data(), m);
  }

  BigNat result(std::size_t bits) const {
    BigNat out;
    mpz_t view;
    mpz_set(out.get_mpz_t(), mpz_roinit_n(view, r.data(), static_cast<mp_size_t>(limbs_for(bits))));
    return out;
  }
};

/// Halving chain m, ceil(m/2), ... down to the first value <= floor, kept
/// on the stack.
struct Chain {
  std::array<std::size_t, 2 * sizeof(std::size_t) * 8> level;
  std::size_t size = 0;

  Chain(std::size_t m, std::size_t floor) {
    floor = std::max<std::size_t>(floor, 1);
    level[size++] = m;
    while (level[size - 1] > floor) {
      level[size] = level[size - 1] - level[size - 1] / 2;
      ++size;
    }
  }
  std::size_t back() const { return level[size - 1]; }
};

inline Workspace& workspace() {
  thread_local Workspace w;
  return w;
}

/// r = (a mod 2^k)^{-1} mod 2^k by the explicit product formula; returns
/// the number of product factors applied.
inline unsigned explicit_core(Workspace& w, std::size_t k) {
  if (k <= kLimbBits) {
    const Limb mask = low_mask(k);
    Limb e = (w.a[0] - 1) & mask;
    w.r[0] = 1;
    if (e == 0) return 0;
    const auto s = static_cast<std::size_t>(std::countr_zero(e));
    Limb u = (Limb{2} - w.a[0]) & mask;
    unsigned factors = 0;
    for (std::size_t i = 1; i * s < k; i <<= 1) {
      e = (e * e) & mask;
      u = (u * (e | 1)) & mask;
      ++factors;
    }
    w.r[0] = u;
    return factors;
  }
  const auto kl = static_cast<mp_size_t>(limbs_for(k));
  // Products land in the spare buffer of each pair and the roles swap.
  Limb* u = w.r.data();
  Limb* u_spare = w.p.data();
  Limb* e = w.t1.data();
  Limb* e_spare = w.t2.data();
  mpn_copyi(e, w.a.data(), kl);
  trim(e, k);
  mpn_sub_1(e, e, kl, 1);
  if (mpn_zero_p(e, kl) != 0) {
    zero(u, static_cast<std::size_t>(kl));
    u[0] = 1;
    return 0;
  }
  const std::size_t s = mpn_scan1(e, 0);
  // 2 - a = 1 - (a - 1)
  mpn_neg(u, e, kl);
  mpn_add_1(u, u, kl, 1);
  trim(u, k);
  unsigned factors = 0;
  for (std::size_t i = 1; i * s < k; i <<= 1) {
    mul(e_spare, e, static_cast<std::size_t>(kl), e, static_cast<std::size_t>(kl));
    std::swap(e, e_spare);
    trim(e, k);
    e[0] |= 1;  // 1 + e, e even
    mul(u_spare, u, static_cast<std::size_t>(kl), e, static_cast<std::size_t>(kl));
    e[0] &= ~Limb{1};
    std::swap(u, u_spare);
    trim(u, k);
    ++factors;
  }
  if (u != w.r.data()) mpn_copyi(w.r.data(), u, kl);
  return factors;
}

/// r: inverse mod 2^h -> inverse mod 2^k (h < k <= 2h), r = 2r - a r^2.
inline void newton_step(Workspace& w, std::size_t h, std::size_t k) {
  if (k <= kLimbBits) {
    const Limb r = w.r[0];
    w.r[0] = (2 * r - w.a[0] * r * r) & low_mask(k);
    return;
  }
  const std::size_t hl = limbs_for(h);
  const std::size_t kl = limbs_for(k);
  Limb* r = w.r.data();
  Limb* sq = w.s.data();
  Limb* prod = w.p.data();
  mul(sq, r, hl, r, hl);
  trim(sq, k);
  mul(prod, sq, kl, w.a.data(), kl);
  zero(r + hl, kl - hl);
  mpn_lshift(r, r, static_cast<mp_size_t>(kl), 1);
  mpn_sub_n(r, r, prod, static_cast<mp_size_t>(kl));
  trim(r, k);
}

/// r: inverse mod 2^h -> r + t 2^h, an inverse mod 2^{2h}, then mod 2^k.
inline void arazi_step(Workspace& w, std::size_t h, std::size_t k) {
  if (h < kLimbBits) {
    // r, a_L and a_H fit one word each; r + t 2^h takes at most two.
    using Wide = unsigned __int128;
    const Limb mask = low_mask(h);
    const Wide a = static_cast<Wide>(w.a[0]) | (w.n > 1 ? static_cast<Wide>(w.a[1]) << kLimbBits : 0);
    const Limb r = w.r[0];
    const Limb b = static_cast<Limb>(a) & mask;
    const Limb a_high = static_cast<Limb>(a >> h) & mask;
    const Limb rb_high = static_cast<Limb>((static_cast<Wide>(r) * b) >> h) & mask;
    const Limb t = (0 - (((rb_high + r * a_high) & mask) * r)) & mask;
    Wide u = static_cast<Wide>(r) | (static_cast<Wide>(t) << h);
    if (k < 2 * kLimbBits) u &= (static_cast<Wide>(1) << k) - 1;
    w.r[0] = static_cast<Limb>(u);
    if (limbs_for(k) > 1) w.r[1] = static_cast<Limb>(u >> kLimbBits);
    return;
  }
  const std::size_t hl = limbs_for(h);
  Limb* r = w.r.data();
  Limb* b = w.t1.data();
  Limb* high = w.s.data();
  Limb* t = w.t2.data();
  Limb* prod = w.p.data();
  extract(b, w.a.data(), w.n, 0, h);
  mul(prod, r, hl, b, hl);
  extract(high, prod, 2 * hl, h, h);  // (r b)_H
  extract(b, w.a.data(), w.n, h, h);  // a_H
  mul(prod, r, hl, b, hl);
  trim(prod, h);  // (r a_H)_L
  mpn_add_n(high, high, prod, static_cast<mp_size_t>(hl));
  trim(high, h);
  mul(prod, high, hl, r, hl);
  trim(prod, h);
  mpn_neg(t, prod, static_cast<mp_size_t>(hl));
  trim(t, h);
  zero(r + hl, limbs_for(2 * h) - hl);
  deposit(r, t, h, h);
  trim(r, k);
}

inline BigNat arazi_qi(const BigNat& a, std::size_t m, unsigned& iterations) {
  Workspace& w = workspace();
  w.load(a, m);
  w.r[0] = 1;
  iterations = 0;
  for (std::size_t h = 1; h < m; h <<= 1, ++iterations) arazi_step(w, h, 2 * h);
  trim(w.r.data(), m);
  return w.result(m);
}

inline BigNat hensel_recursive(const BigNat& a, std::size_t m, unsigned& iterations) {
  const Chain chain(m, 1);
  iterations = static_cast<unsigned>(chain.size - 1);
  Workspace& w = workspace();
  w.load(a, m);
  w.r[0] = 1;
  for (std::size_t j = chain.size - 1; j-- > 0;) newton_step(w, chain.level[j + 1], chain.level[j]);
  return w.result(m);
}

inline BigNat explicit_2m(const BigNat& a, std::size_t m, unsigned& iterations) {
  Workspace& w = workspace();
  w.load(a, m);
  iterations = explicit_core(w, m);
  return w.result(m);
}

inline BigNat hybrid(const BigNat& a, std::size_t m, const Thresholds& th, unsigned& iterations) {
  if (m <= std::max<std::size_t>(th.explicit_cutoff, 1)) return explicit_2m(a, m, iterations);
  Workspace& w = workspace();
  w.load(a, m);
  const Chain chain(m, th.explicit_cutoff);
  iterations = explicit_core(w, chain.back());
  for (std::size_t j = chain.size - 1; j-- > 0;) {
    const std::size_t level = chain.level[j];
    if (th.uses_arazi_step(level)) {
      arazi_step(w, chain.level[j + 1], level);
    } else {
      newton_step(w, chain.level[j + 1], level);
    }
    ++iterations;
  }
  return w.result(m);
}

}  // namespace invmod::detail::limb

#endif  // INVMOD_LIMB_ENGINE_HPP

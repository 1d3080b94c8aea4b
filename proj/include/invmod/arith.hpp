#ifndef INVMOD_ARITH_HPP
#define INVMOD_ARITH_HPP

#include "invmod/bignat.hpp"
#include "invmod/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

namespace invmod {

static_assert(GMP_NUMB_BITS == 64, "64-bit limbs expected");

namespace detail {

/// Read-only view of the low limbs of `x` covering at least `bits` bits.
/// The view aliases `x` and is congruent to it modulo 2^bits.
inline mpz_srcptr low_view(mpz_t storage, const BigNat& x, std::size_t bits) {
  const mpz_srcptr src = x.get_mpz_t();
  const mp_size_t have = mpz_size(src);
  const mp_size_t need = static_cast<mp_size_t>((bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS);
  return mpz_roinit_n(storage, mpz_limbs_read(src), std::min(have, need));
}

/// Read-only view of `x` shifted right by a whole number of limbs, covering
/// at least `bits` bits past the limb boundary.
inline mpz_srcptr limb_window(mpz_t storage, const BigNat& x, std::size_t first_limb, std::size_t bits) {
  const mpz_srcptr src = x.get_mpz_t();
  const mp_size_t have = static_cast<mp_size_t>(mpz_size(src));
  const mp_size_t start = static_cast<mp_size_t>(first_limb);
  if (start >= have) return mpz_roinit_n(storage, nullptr, 0);
  const mp_size_t need = static_cast<mp_size_t>((bits + GMP_NUMB_BITS - 1) / GMP_NUMB_BITS);
  return mpz_roinit_n(storage, mpz_limbs_read(src) + start, std::min(have - start, need));
}

}  // namespace detail

/// How products are formed. Native defers to the library's size-dependent
/// choice (Karatsuba, Toom, FFT); Schoolbook forces the quadratic method at
/// every size, the cost model the binary-complexity bounds are stated in.
enum class MulBackend { Native, Schoolbook };

namespace detail {

inline std::atomic<MulBackend>& mul_backend_slot() {
  static std::atomic<MulBackend> slot{MulBackend::Native};
  return slot;
}

inline mp_limb_t mul_row(mp_limb_t* rp, const mp_limb_t* xp, mp_size_t n, mp_limb_t y) {
  unsigned __int128 acc = 0;
  for (mp_size_t i = 0; i < n; ++i) {
    acc += static_cast<unsigned __int128>(xp[i]) * y;
    rp[i] = static_cast<mp_limb_t>(acc);
    acc >>= 64;
  }
  return static_cast<mp_limb_t>(acc);
}

inline mp_limb_t addmul_row(mp_limb_t* rp, const mp_limb_t* xp, mp_size_t n, mp_limb_t y) {
  unsigned __int128 acc = 0;
  for (mp_size_t i = 0; i < n; ++i) {
    acc += static_cast<unsigned __int128>(xp[i]) * y + rp[i];
    rp[i] = static_cast<mp_limb_t>(acc);
    acc >>= 64;
  }
  return static_cast<mp_limb_t>(acc);
}

/// Quadratic product of the magnitudes of x and y into rp[0, nx + ny),
/// nx >= ny >= 1. rp must not overlap the inputs.
inline void schoolbook_limbs(mp_limb_t* rp, const mp_limb_t* xp, mp_size_t nx, const mp_limb_t* yp, mp_size_t ny) {
  if (xp == yp && nx == ny) {
    // Off-diagonal triangle once, doubled, plus the diagonal squares.
    const mp_size_t n = nx;
    rp[0] = 0;
    rp[2 * n - 1] = 0;
    if (n > 1) {
      rp[n] = mul_row(rp + 1, xp + 1, n - 1, xp[0]);
      for (mp_size_t i = 1; i + 1 < n; ++i) rp[n + i] = addmul_row(rp + 2 * i + 1, xp + i + 1, n - i - 1, xp[i]);
    }
    mp_limb_t top = 0;
    for (mp_size_t i = 0; i < 2 * n; ++i) {
      const mp_limb_t next = rp[i] >> 63;
      rp[i] = (rp[i] << 1) | top;
      top = next;
    }
    unsigned __int128 acc = 0;
    for (mp_size_t i = 0; i < n; ++i) {
      const unsigned __int128 sq = static_cast<unsigned __int128>(xp[i]) * xp[i];
      acc += static_cast<unsigned __int128>(rp[2 * i]) + static_cast<mp_limb_t>(sq);
      rp[2 * i] = static_cast<mp_limb_t>(acc);
      acc >>= 64;
      acc += static_cast<unsigned __int128>(rp[2 * i + 1]) + static_cast<mp_limb_t>(sq >> 64);
      rp[2 * i + 1] = static_cast<mp_limb_t>(acc);
      acc >>= 64;
    }
    return;
  }
  rp[nx] = mul_row(rp, xp, nx, yp[0]);
  for (mp_size_t j = 1; j < ny; ++j) rp[nx + j] = addmul_row(rp + j, xp, nx, yp[j]);
}

/// Quadratic product of the magnitudes of x and y into dst.
inline void schoolbook_mul(mpz_ptr dst, mpz_srcptr x, mpz_srcptr y) {
  mp_size_t nx = static_cast<mp_size_t>(mpz_size(x));
  mp_size_t ny = static_cast<mp_size_t>(mpz_size(y));
  if (nx == 0 || ny == 0) {
    mpz_set_ui(dst, 0);
    return;
  }
  const mp_limb_t* xp = mpz_limbs_read(x);
  const mp_limb_t* yp = mpz_limbs_read(y);
  if (nx < ny) {
    std::swap(nx, ny);
    std::swap(xp, yp);
  }
  if (dst != x && dst != y) {
    schoolbook_limbs(mpz_limbs_write(dst, nx + ny), xp, nx, yp, ny);
    mpz_limbs_finish(dst, nx + ny);
    return;
  }
  thread_local std::vector<mp_limb_t> scratch;
  scratch.resize(static_cast<std::size_t>(nx + ny));
  schoolbook_limbs(scratch.data(), xp, nx, yp, ny);
  mpz_t view;
  mpz_set(dst, mpz_roinit_n(view, scratch.data(), nx + ny));
}

inline void multiply(mpz_ptr dst, mpz_srcptr x, mpz_srcptr y) {
  if (mul_backend_slot().load(std::memory_order_relaxed) == MulBackend::Schoolbook) {
    schoolbook_mul(dst, x, y);
  } else {
    mpz_mul(dst, x, y);
  }
}

/// rp[0, nx + ny) = x * y on raw limbs through the selected backend.
/// nx, ny >= 1; rp must not overlap the inputs.
inline void multiply_limbs(mp_limb_t* rp, const mp_limb_t* xp, mp_size_t nx, const mp_limb_t* yp, mp_size_t ny) {
  if (nx < ny) {
    std::swap(xp, yp);
    std::swap(nx, ny);
  }
  if (mul_backend_slot().load(std::memory_order_relaxed) == MulBackend::Schoolbook) {
    schoolbook_limbs(rp, xp, nx, yp, ny);
  } else if (xp == yp && nx == ny) {
    mpn_sqr(rp, xp, nx);
  } else {
    mpn_mul(rp, xp, nx, yp, ny);
  }
}

}  // namespace detail

inline MulBackend mul_backend() { return detail::mul_backend_slot().load(); }

/// Selects the multiplication backend for the lifetime of the guard.
/// Process-wide; only switch it while no lift is running.
class ScopedMulBackend {
 public:
  explicit ScopedMulBackend(MulBackend b) : previous_(detail::mul_backend_slot().exchange(b)) {}
  ~ScopedMulBackend() { detail::mul_backend_slot().store(previous_); }
  ScopedMulBackend(const ScopedMulBackend&) = delete;
  ScopedMulBackend& operator=(const ScopedMulBackend&) = delete;

 private:
  MulBackend previous_;
};

// In-place primitives. Every one counts exactly one operation in its
// category (extract_bits_into counts a shift and a mask) and reports its
// result width to the context's probe.

inline void mul_into(BigNat& dst, const BigNat& x, const BigNat& y, CountingContext& ctx) {
  detail::multiply(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  ctx.record(OpKind::Mul, dst);
}

/// dst = x * (y mod 2^k'), where k' >= k is y's width rounded up to limbs.
/// Congruent to x*y modulo 2^k without touching y's high limbs.
inline void mul_low_into(BigNat& dst, const BigNat& x, const BigNat& y, std::size_t k, CountingContext& ctx) {
  mpz_t view;
  detail::multiply(dst.get_mpz_t(), x.get_mpz_t(), detail::low_view(view, y, k));
  ctx.record(OpKind::Mul, dst);
}

inline void sqr_into(BigNat& dst, const BigNat& x, CountingContext& ctx) {
  detail::multiply(dst.get_mpz_t(), x.get_mpz_t(), x.get_mpz_t());
  ctx.record(OpKind::Sqr, dst);
}

inline void mask_into(BigNat& dst, const BigNat& x, std::size_t k, CountingContext& ctx) {
  mpz_fdiv_r_2exp(dst.get_mpz_t(), x.get_mpz_t(), k);
  ctx.record(OpKind::MaskOr, dst);
}

inline void or_into(BigNat& dst, const BigNat& x, const BigNat& y, CountingContext& ctx) {
  mpz_ior(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  ctx.record(OpKind::MaskOr, dst);
}

inline void shl_into(BigNat& dst, const BigNat& x, std::size_t k, CountingContext& ctx) {
  mpz_mul_2exp(dst.get_mpz_t(), x.get_mpz_t(), k);
  ctx.record(OpKind::Shift, dst);
}

inline void shr_into(BigNat& dst, const BigNat& x, std::size_t k, CountingContext& ctx) {
  mpz_fdiv_q_2exp(dst.get_mpz_t(), x.get_mpz_t(), k);
  ctx.record(OpKind::Shift, dst);
}

/// dst = (x >> offset) mod 2^width, reading only the limbs that matter.
inline void extract_bits_into(BigNat& dst, const BigNat& x, std::size_t offset, std::size_t width,
                              CountingContext& ctx) {
  mpz_t view;
  const std::size_t first_limb = offset / GMP_NUMB_BITS;
  const std::size_t inner = offset % GMP_NUMB_BITS;
  mpz_fdiv_q_2exp(dst.get_mpz_t(), detail::limb_window(view, x, first_limb, inner + width), inner);
  ctx.record(OpKind::Shift, dst);
  mpz_fdiv_r_2exp(dst.get_mpz_t(), dst.get_mpz_t(), width);
  ctx.record(OpKind::MaskOr, dst);
}

inline void add_into(BigNat& dst, const BigNat& x, const BigNat& y, CountingContext& ctx) {
  mpz_add(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  ctx.record(OpKind::AddSub, dst);
}

inline void add_ui_into(BigNat& dst, const BigNat& x, unsigned long y, CountingContext& ctx) {
  mpz_add_ui(dst.get_mpz_t(), x.get_mpz_t(), y);
  ctx.record(OpKind::AddSub, dst);
}

/// dst = x - y; requires x >= y.
inline void sub_into(BigNat& dst, const BigNat& x, const BigNat& y, CountingContext& ctx) {
  mpz_sub(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  if (mpz_sgn(dst.get_mpz_t()) < 0) throw std::logic_error("sub_into: negative difference");
  ctx.record(OpKind::AddSub, dst);
}

inline void sub_ui_into(BigNat& dst, const BigNat& x, unsigned long y, CountingContext& ctx) {
  mpz_sub_ui(dst.get_mpz_t(), x.get_mpz_t(), y);
  if (mpz_sgn(dst.get_mpz_t()) < 0) throw std::logic_error("sub_ui_into: negative difference");
  ctx.record(OpKind::AddSub, dst);
}

/// dst = (x - y) mod 2^k, always in [0, 2^k).
inline void sub_mod_pow2_into(BigNat& dst, const BigNat& x, const BigNat& y, std::size_t k, CountingContext& ctx) {
  mpz_sub(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  mpz_fdiv_r_2exp(dst.get_mpz_t(), dst.get_mpz_t(), k);
  ctx.record(OpKind::AddSub, dst);
}

/// dst = x - y, lifted by one multiple of `modulus` when negative.
/// Requires y < x + modulus.
inline void sub_mod_into(BigNat& dst, const BigNat& x, const BigNat& y, const BigNat& modulus, CountingContext& ctx) {
  mpz_sub(dst.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  if (mpz_sgn(dst.get_mpz_t()) < 0) mpz_add(dst.get_mpz_t(), dst.get_mpz_t(), modulus.get_mpz_t());
  ctx.record(OpKind::AddSub, dst);
}

/// dst = -x mod 2^k for x in [0, 2^k).
inline void neg_mod_pow2_into(BigNat& dst, const BigNat& x, std::size_t k, CountingContext& ctx) {
  if (mpz_sgn(x.get_mpz_t()) == 0) {
    mpz_set_ui(dst.get_mpz_t(), 0);
  } else {
    mpz_neg(dst.get_mpz_t(), x.get_mpz_t());
    mpz_fdiv_r_2exp(dst.get_mpz_t(), dst.get_mpz_t(), k);
  }
  ctx.record(OpKind::AddSub, dst);
}

inline void mod_into(BigNat& dst, const BigNat& x, const BigNat& modulus, CountingContext& ctx) {
  if (mpz_sgn(modulus.get_mpz_t()) <= 0) throw std::domain_error("mod_reduce: zero modulus");
  mpz_fdiv_r(dst.get_mpz_t(), x.get_mpz_t(), modulus.get_mpz_t());
  ctx.record(OpKind::ModReduce, dst);
}

// Value-returning surface.

inline BigNat mul(const BigNat& x, const BigNat& y, CountingContext& ctx) {
  BigNat r;
  mul_into(r, x, y, ctx);
  return r;
}

inline BigNat sqr(const BigNat& x, CountingContext& ctx) {
  BigNat r;
  sqr_into(r, x, ctx);
  return r;
}

/// x mod 2^k.
inline BigNat mask_low_bits(const BigNat& x, std::size_t k, CountingContext& ctx) {
  BigNat r;
  mask_into(r, x, k, ctx);
  return r;
}

/// floor(x * 2^k); negative k shifts right and discards low bits.
inline BigNat shift(const BigNat& x, long long k, CountingContext& ctx) {
  BigNat r;
  if (k >= 0) {
    shl_into(r, x, static_cast<std::size_t>(k), ctx);
  } else {
    shr_into(r, x, static_cast<std::size_t>(-k), ctx);
  }
  return r;
}

/// x mod modulus in [0, modulus). Throws std::domain_error for modulus 0.
inline BigNat mod_reduce(const BigNat& x, const BigNat& modulus, CountingContext& ctx) {
  BigNat r;
  mod_into(r, x, modulus, ctx);
  return r;
}

/// p^i. Counted as one shift for p = 2, otherwise one mul per
/// square-and-multiply step.
inline BigNat pow_prime(const BigNat& p, std::size_t i, CountingContext& ctx) {
  if (p < 2) throw std::domain_error("pow_prime: base must be >= 2");
  if (p == 2) {
    BigNat r = pow2(i);
    ctx.record(OpKind::Shift, r);
    return r;
  }
  BigNat result = 1;
  BigNat base = p;
  bool first = true;
  for (std::size_t e = i; e != 0; e >>= 1) {
    if (!first) {
      mpz_mul(base.get_mpz_t(), base.get_mpz_t(), base.get_mpz_t());
      ctx.record(OpKind::Mul, base);
    }
    first = false;
    if (e & 1U) {
      if (result == 1) {
        result = base;
      } else {
        mpz_mul(result.get_mpz_t(), result.get_mpz_t(), base.get_mpz_t());
        ctx.record(OpKind::Mul, result);
      }
    }
  }
  return result;
}

/// Largest s with 2^s | x. Throws std::domain_error for x = 0.
inline std::size_t trailing_zeros(const BigNat& x) {
  if (mpz_sgn(x.get_mpz_t()) == 0) throw std::domain_error("trailing_zeros: zero has no trailing-zero count");
  return mpz_scan1(x.get_mpz_t(), 0);
}

/// Memo of p^i for one prime. Only misses are counted.
class PowerCache {
 public:
  explicit PowerCache(BigNat p) : p_(std::move(p)) {}

  const BigNat& prime() const { return p_; }

  const BigNat& get(std::size_t i, CountingContext& ctx) {
    auto it = cache_.find(i);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(i, pow_prime(p_, i, ctx)).first->second;
  }

  /// Uncounted lookup used for moduli the caller has already budgeted.
  const BigNat& get(std::size_t i) {
    CountingContext quiet;
    return get(i, quiet);
  }

  std::size_t size() const { return cache_.size(); }

 private:
  BigNat p_;
  std::map<std::size_t, BigNat> cache_;
};

}  // namespace invmod

#endif  // INVMOD_ARITH_HPP

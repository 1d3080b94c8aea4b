#ifndef INVMOD_LIFTING_HPP
#define INVMOD_LIFTING_HPP

#include "invmod/arith.hpp"
#include "invmod/limb_engine.hpp"
#include "invmod/bignat.hpp"
#include "invmod/counting.hpp"
#include "invmod/thresholds.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace invmod {

/// Thrown when gcd(a, n) != 1. Carries the gcd.
class NotInvertible : public std::domain_error {
 public:
  explicit NotInvertible(BigNat gcd)
      : std::domain_error("not invertible: gcd=" + gcd.get_str()), gcd_(std::move(gcd)) {}
  const BigNat& gcd() const { return gcd_; }

 private:
  BigNat gcd_;
};

/// Modulus p^m with p prime (probabilistic check) and m >= 1.
class PrimePower {
 public:
  PrimePower(BigNat p, std::size_t m) : p_(std::move(p)), m_(m) {
    if (p_ < 2) throw std::domain_error("PrimePower: p must be >= 2");
    if (mpz_probab_prime_p(p_.get_mpz_t(), 30) == 0) throw std::domain_error("PrimePower: p = " + p_.get_str() + " is not prime");
    if (m_ < 1) throw std::domain_error("PrimePower: exponent must be >= 1");
    if (p_ == 2) {
      modulus_ = pow2(m_);
    } else {
      mpz_pow_ui(modulus_.get_mpz_t(), p_.get_mpz_t(), m_);
    }
  }

  static PrimePower binary(std::size_t m) { return PrimePower(2, m); }

  const BigNat& p() const { return p_; }
  std::size_t m() const { return m_; }
  const BigNat& modulus() const { return modulus_; }
  bool is_binary() const { return p_ == 2; }

 private:
  BigNat p_;
  std::size_t m_;
  BigNat modulus_;
};

/// Lifting algorithm selector. RthOrder carries its order r >= 2.
class AlgoKind {
 public:
  enum class Family { AraziQi, HenselIterative, HenselRecursive, HenselProduct, Explicit, Hybrid, RthOrder };

  constexpr AlgoKind(Family f) : family_(f), order_(f == Family::RthOrder ? 2 : 0) {}  // NOLINT: implicit by design of enum use

  static AlgoKind rth_order(unsigned r) {
    if (r < 2) throw std::domain_error("rth_order: order must be >= 2");
    AlgoKind k(Family::RthOrder);
    k.order_ = r;
    return k;
  }

  constexpr Family family() const { return family_; }
  constexpr unsigned order() const { return order_; }
  /// Only defined modulo powers of two.
  constexpr bool binary_only() const { return family_ == Family::AraziQi || family_ == Family::Hybrid; }

  std::string name() const {
    switch (family_) {
      case Family::AraziQi: return "arazi_qi";
      case Family::HenselIterative: return "hensel_iterative";
      case Family::HenselRecursive: return "hensel_recursive";
      case Family::HenselProduct: return "hensel_product";
      case Family::Explicit: return "explicit";
      case Family::Hybrid: return "hybrid";
      case Family::RthOrder: return "rth_order" + std::to_string(order_);
    }
    return "?";
  }

  /// Accepts the names produced by name(); `rth_order` alone means r = 3.
  static AlgoKind parse(std::string_view text) {
    static constexpr std::pair<std::string_view, Family> table[] = {
        {"arazi_qi", Family::AraziQi},         {"hensel_iterative", Family::HenselIterative},
        {"hensel_recursive", Family::HenselRecursive}, {"hensel_product", Family::HenselProduct},
        {"explicit", Family::Explicit},         {"hybrid", Family::Hybrid},
    };
    for (const auto& [name, family] : table) {
      if (text == name) return AlgoKind(family);
    }
    constexpr std::string_view rth = "rth_order";
    if (text.substr(0, rth.size()) == rth) {
      const std::string_view digits = text.substr(rth.size());
      if (digits.empty()) return rth_order(3);
      if (digits.find_first_not_of("0123456789") == std::string_view::npos && digits.size() < 6) {
        return rth_order(static_cast<unsigned>(std::stoul(std::string(digits))));
      }
    }
    throw std::invalid_argument("unknown algorithm: " + std::string(text));
  }

  friend constexpr bool operator==(const AlgoKind&, const AlgoKind&) = default;

 private:
  Family family_;
  unsigned order_;
};

/// Inverse plus the evidence gathered while computing it.
struct LiftReport {
  BigNat inverse;
  OpTally tally;
  unsigned iterations = 0;
};

/// a^{-1} mod n by the extended Euclidean algorithm, in [1, n).
/// Throws NotInvertible carrying gcd(a, n), std::domain_error for n < 2.
inline BigNat egcd_inverse(const BigNat& a, const BigNat& n) {
  if (n < 2) throw std::domain_error("egcd_inverse: modulus must be >= 2");
  BigNat g, s;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), nullptr, a.get_mpz_t(), n.get_mpz_t());
  if (g != 1) throw NotInvertible(g);
  mpz_fdiv_r(s.get_mpz_t(), s.get_mpz_t(), n.get_mpz_t());
  return s;
}

namespace detail {

inline std::size_t ceil_half(std::size_t m) { return m - m / 2; }

/// Reduction modulo p^k: a mask when p = 2, a division by a cached power
/// otherwise. Powers are built quietly so they never reach the tally.
class Reducer {
 public:
  explicit Reducer(const BigNat& p) : binary_(p == 2), powers_(p) {}

  bool binary() const { return binary_; }
  const BigNat& prime() const { return powers_.prime(); }
  const BigNat& power(std::size_t k) { return powers_.get(k); }

  void reduce(BigNat& dst, const BigNat& x, std::size_t k, CountingContext& ctx) {
    if (binary_) {
      mask_into(dst, x, k, ctx);
    } else {
      mod_into(dst, x, power(k), ctx);
    }
  }

  /// dst = (x - y) mod p^k for y < p^k.
  void sub(BigNat& dst, const BigNat& x, const BigNat& y, std::size_t k, CountingContext& ctx) {
    if (binary_) {
      sub_mod_pow2_into(dst, x, y, k, ctx);
    } else {
      sub_mod_into(dst, x, y, power(k), ctx);
    }
  }

 private:
  bool binary_;
  PowerCache powers_;
};

[[noreturn, gnu::cold, gnu::noinline]] inline void throw_domain(std::string_view who, const char* what) {
  throw std::domain_error(std::string(who) + what);
}

inline void require_odd(const BigNat& a, std::string_view who) {
  if (!is_odd(a)) [[unlikely]] throw_domain(who, ": operand must be odd modulo 2^m");
}

/// a mod p^m, uncounted; throws NotInvertible when p | a.
inline BigNat reduce_on_entry(const BigNat& a, const PrimePower& pp) {
  BigNat r;
  if (pp.is_binary()) {
    mpz_fdiv_r_2exp(r.get_mpz_t(), a.get_mpz_t(), pp.m());
  } else {
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), pp.modulus().get_mpz_t());
  }
  if (mpz_divisible_p(r.get_mpz_t(), pp.p().get_mpz_t()) != 0) throw NotInvertible(pp.p());
  return r;
}

inline void check_pow2_input(const BigNat& a, std::size_t m, std::string_view who) {
  if (m < 1) [[unlikely]] throw_domain(who, ": exponent must be >= 1");
  require_odd(a, who);
}

/// The limb engine reads the low limbs of a positive operand directly.
inline bool limb_ready(const BigNat& a, const CountingContext& ctx) { return !ctx.enabled && mpz_sgn(a.get_mpz_t()) > 0; }

inline BigNat reduce_pow2_on_entry(const BigNat& a, std::size_t m, std::string_view who) {
  check_pow2_input(a, m, who);
  BigNat r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), a.get_mpz_t(), m);
  return r;
}

/// Base case a^{-1} mod p; counted as one egcd.
inline BigNat base_inverse(const BigNat& a, Reducer& red, CountingContext& ctx) {
  ctx.count(OpKind::Egcd);
  if (red.binary()) return 1;
  BigNat low;
  mpz_fdiv_r(low.get_mpz_t(), a.get_mpz_t(), red.prime().get_mpz_t());
  return egcd_inverse(low, red.prime());
}

inline LiftReport make_report(BigNat inverse, unsigned iterations, const CountingContext& ctx, const OpTally& before) {
  return {std::move(inverse), ctx.tally.since(before), iterations};
}

// Engines. Inputs are already reduced and validated.

inline BigNat explicit_2m_engine(const BigNat& a, std::size_t m, CountingContext& ctx, unsigned* iterations) {
  if (a == 1) return 1;
  BigNat amone = a;
  mpz_sub_ui(amone.get_mpz_t(), amone.get_mpz_t(), 1);
  const std::size_t s = trailing_zeros(amone);  // a = 2^s t + 1

  BigNat u, temp;
  // U = 2 - a mod 2^m
  mpz_setbit(u.get_mpz_t(), m);
  mpz_add_ui(u.get_mpz_t(), u.get_mpz_t(), 2);
  sub_into(u, u, a, ctx);
  sub_ui_into(amone, a, 1, ctx);
  unsigned n = 1;
  ctx.step("explicit", n, n, u);
  // i < m/s  <=>  i*s < m
  for (std::size_t i = 1; i * s < m; i <<= 1) {
    sqr_into(amone, amone, ctx);
    mask_into(amone, amone, m, ctx);
    add_ui_into(temp, amone, 1, ctx);
    mul_into(u, u, temp, ctx);
    mask_into(u, u, m, ctx);
    ++n;
    ctx.step("explicit", n, n, u);
  }
  if (iterations != nullptr) *iterations += n - 1;
  return u;
}

/// One Newton step U <- 2U - aU^2 mod p^m from an inverse mod p^h.
inline void newton_step(BigNat& r, const BigNat& a, std::size_t m, Reducer& red, BigNat& temp, CountingContext& ctx) {
  sqr_into(temp, r, ctx);
  red.reduce(temp, temp, m, ctx);
  mul_into(temp, temp, a, ctx);
  red.reduce(temp, temp, m, ctx);
  shl_into(r, r, 1, ctx);
  red.sub(r, r, temp, m, ctx);
  red.reduce(r, r, m, ctx);
}

/// One Arazi-Qi step: from r = a^{-1} mod 2^h forms r + t 2^h, an inverse
/// mod 2^{2h}, where t = -((r b)_H + (r a_H)_L) r mod 2^h and b = a mod 2^h.
inline void arazi_step(BigNat& r, const BigNat& a, const BigNat& b, std::size_t h, BigNat& t1, BigNat& t2,
                       CountingContext& ctx) {
  mul_into(t1, r, b, ctx);
  shr_into(t1, t1, h, ctx);
  extract_bits_into(t2, a, h, h, ctx);
  mul_into(t2, r, t2, ctx);
  mask_into(t2, t2, h, ctx);
  add_into(t1, t1, t2, ctx);
  mul_into(t1, t1, r, ctx);
  mask_into(t1, t1, h, ctx);
  neg_mod_pow2_into(t1, t1, h, ctx);
  shl_into(t1, t1, h, ctx);
  or_into(r, r, t1, ctx);
}

/// Exponent chain m, ceil(m/2), ceil(m/4), ... down to the first value
/// <= floor (and >= 1).
inline std::vector<std::size_t> halving_chain(std::size_t m, std::size_t floor) {
  std::vector<std::size_t> chain{m};
  while (chain.back() > std::max<std::size_t>(floor, 1)) chain.push_back(ceil_half(chain.back()));
  return chain;
}

/// Recursive Newton-Hensel, unrolled: operands a mod p^{m_j} are formed on
/// the way down (one reduction per level), the Newton steps on the way up.
inline BigNat hensel_recursive_engine(const BigNat& a, std::size_t m, Reducer& red, CountingContext& ctx,
                                      unsigned& iterations) {
  const std::vector<std::size_t> chain = halving_chain(m, 1);
  std::vector<BigNat> operands(chain.size());
  operands[0] = a;
  for (std::size_t j = 1; j < chain.size(); ++j) red.reduce(operands[j], operands[j - 1], chain[j], ctx);
  BigNat r = base_inverse(operands.back(), red, ctx);
  ctx.clear_peak();
  BigNat temp;
  for (std::size_t j = chain.size() - 1; j-- > 0;) {
    newton_step(r, operands[j], chain[j], red, temp, ctx);
    ++iterations;
    ctx.step("hensel_recursive", iterations, chain[j], r);
  }
  return r;
}

/// Hybrid, unrolled. Below the cutoff the explicit formula; each level
/// above closes with a Newton or Arazi-Qi step on a (not on b).
inline BigNat hybrid_engine(const BigNat& a, std::size_t m, const Thresholds& th, CountingContext& ctx,
                            unsigned& iterations) {
  if (m <= std::max<std::size_t>(th.explicit_cutoff, 1)) return explicit_2m_engine(a, m, ctx, &iterations);
  const std::vector<std::size_t> chain = halving_chain(m, th.explicit_cutoff);
  BigNat b, t1, t2;
  mask_into(b, a, chain.back(), ctx);
  BigNat r = explicit_2m_engine(b, chain.back(), ctx, &iterations);
  for (std::size_t j = chain.size() - 1; j-- > 0;) {
    const std::size_t level = chain[j];
    const std::size_t h = chain[j + 1];
    if (th.uses_arazi_step(level)) {
      mask_into(b, a, h, ctx);
      arazi_step(r, a, b, h, t1, t2, ctx);
      mask_into(r, r, level, ctx);
    } else {
      // u = 2r - a r^2 mod 2^level
      sqr_into(t1, r, ctx);
      mask_into(t1, t1, level, ctx);
      mul_low_into(t1, t1, a, level, ctx);
      mask_into(t1, t1, level, ctx);
      shl_into(r, r, 1, ctx);
      sub_mod_pow2_into(r, r, t1, level, ctx);
    }
    ++iterations;
    ctx.step("hybrid", iterations, level, r);
  }
  return r;
}

}  // namespace detail

/// Arazi-Qi inverse modulo 2^m. At doubling step i only 2i-bit values are
/// formed; the loop overshoots for non-power-of-two m and a final mask trims.
inline LiftReport arazi_qi_lift(const BigNat& a_in, std::size_t m, CountingContext& ctx) {
  const OpTally before = ctx.tally;
  unsigned iterations = 0;
  if (detail::limb_ready(a_in, ctx)) {
    detail::check_pow2_input(a_in, m, "arazi_qi_lift");
    BigNat u = detail::limb::arazi_qi(a_in, m, iterations);
    return detail::make_report(std::move(u), iterations, ctx, before);
  }
  const BigNat a = detail::reduce_pow2_on_entry(a_in, m, "arazi_qi_lift");
  BigNat u = 1, b, t1, t2;
  for (std::size_t i = 1; i < m; i <<= 1) {
    mask_into(b, a, i, ctx);
    detail::arazi_step(u, a, b, i, t1, t2, ctx);
    ++iterations;
    ctx.step("arazi_qi", iterations, 2 * i, u);
  }
  mask_into(u, u, m, ctx);
  return detail::make_report(std::move(u), iterations, ctx, before);
}

/// Newton-Hensel iteration U <- U(2 - aU) with moduli p^2, p^4, ... up to
/// the largest power of two below m, then one closing step modulo p^m.
inline LiftReport hensel_iterative(const BigNat& a_in, const PrimePower& pp, CountingContext& ctx) {
  const BigNat a = detail::reduce_on_entry(a_in, pp);
  const OpTally before = ctx.tally;
  const std::size_t m = pp.m();
  detail::Reducer red(pp.p());

  // Operand truncated to the working precision, so step i only touches
  // O(i)-bit values. Binary: a view of the low limbs. Odd p: a ladder of
  // residues a mod p^i, built before counting starts.
  std::vector<std::pair<std::size_t, BigNat>> ladder;
  if (!red.binary()) {
    std::vector<std::size_t> levels;
    for (std::size_t i = 2; i < m; i <<= 1) levels.push_back(i);
    BigNat cur = a;
    for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
      mpz_fdiv_r(cur.get_mpz_t(), cur.get_mpz_t(), red.power(*it).get_mpz_t());
      ladder.emplace_back(*it, cur);
    }
    std::reverse(ladder.begin(), ladder.end());
  }

  BigNat u = detail::base_inverse(a, red, ctx);
  BigNat temp;
  unsigned iterations = 0;
  std::size_t level = 0;
  for (std::size_t i = 2; i < m; i <<= 1, ++level) {
    sqr_into(temp, u, ctx);
    red.reduce(temp, temp, i, ctx);
    if (red.binary()) {
      mul_low_into(temp, temp, a, i, ctx);
    } else {
      mul_into(temp, temp, ladder[level].second, ctx);
    }
    red.reduce(temp, temp, i, ctx);
    shl_into(u, u, 1, ctx);
    red.sub(u, u, temp, i, ctx);
    ++iterations;
    ctx.step("hensel_iterative", iterations, i, u);
  }
  detail::newton_step(u, a, m, red, temp, ctx);
  ++iterations;
  ctx.step("hensel_iterative", iterations, m, u);
  return detail::make_report(std::move(u), iterations, ctx, before);
}

/// Newton-Hensel by halving: recurse on h = ceil(m/2), then one step mod p^m.
inline LiftReport hensel_recursive(const BigNat& a_in, const PrimePower& pp, CountingContext& ctx) {
  const OpTally before = ctx.tally;
  unsigned iterations = 0;
  if (pp.is_binary() && detail::limb_ready(a_in, ctx)) {
    if (!is_odd(a_in)) throw NotInvertible(pp.p());
    BigNat u = detail::limb::hensel_recursive(a_in, pp.m(), iterations);
    return detail::make_report(std::move(u), iterations, ctx, before);
  }
  const BigNat a = detail::reduce_on_entry(a_in, pp);
  detail::Reducer red(pp.p());
  BigNat u = detail::hensel_recursive_engine(a, pp.m(), red, ctx, iterations);
  return detail::make_report(std::move(u), iterations, ctx, before);
}

/// Newton-Hensel in product form U <- U (2 - aU) with every reduction
/// modulo the full p^m; the baseline that the squaring form of
/// hensel_iterative is measured against.
inline LiftReport hensel_product(const BigNat& a_in, const PrimePower& pp, CountingContext& ctx) {
  const BigNat a = detail::reduce_on_entry(a_in, pp);
  const OpTally before = ctx.tally;
  const std::size_t m = pp.m();
  detail::Reducer red(pp.p());
  BigNat u = detail::base_inverse(a, red, ctx);
  BigNat temp;
  const BigNat two = 2;
  unsigned iterations = 0;
  for (std::size_t precision = 1; precision < m; precision *= 2) {
    mul_into(temp, a, u, ctx);
    red.reduce(temp, temp, m, ctx);
    red.sub(temp, two, temp, m, ctx);
    mul_into(u, u, temp, ctx);
    red.reduce(u, u, m, ctx);
    ++iterations;
    ctx.step("hensel_product", iterations, std::min(2 * precision, m), u);
  }
  return detail::make_report(std::move(u), iterations, ctx, before);
}

/// Closed-form inverse modulo 2^m: U = (2 - a) prod_{i>=1} (1 + (a-1)^(2^i)),
/// every reduction at the full width m. With a = 2^s t + 1 the loop runs
/// while i < m/s.
namespace detail {

inline LiftReport explicit_2m_as(const BigNat& a_in, std::size_t m, CountingContext& ctx, std::string_view who) {
  const OpTally before = ctx.tally;
  unsigned iterations = 0;
  if (limb_ready(a_in, ctx)) {
    check_pow2_input(a_in, m, who);
    BigNat u = limb::explicit_2m(a_in, m, iterations);
    return make_report(std::move(u), iterations, ctx, before);
  }
  const BigNat a = reduce_pow2_on_entry(a_in, m, who);
  BigNat u = ctx.enabled ? explicit_2m_engine(a, m, ctx, &iterations) : limb::explicit_2m(a, m, iterations);
  return make_report(std::move(u), iterations, ctx, before);
}

}  // namespace detail

inline LiftReport explicit_2m(const BigNat& a_in, std::size_t m, CountingContext& ctx) {
  return detail::explicit_2m_as(a_in, m, ctx, "explicit_2m");
}

/// Closed-form inverse modulo p^m from b = a^{-1} mod p:
/// V_n = b(2 - ab) prod_{i=1}^{n-1} (1 + (ab - 1)^(2^i)), run until 2^n >= m.
inline LiftReport explicit_prime_power(const BigNat& a_in, const PrimePower& pp, CountingContext& ctx) {
  const BigNat a = detail::reduce_on_entry(a_in, pp);
  const OpTally before = ctx.tally;
  const std::size_t m = pp.m();
  detail::Reducer red(pp.p());
  BigNat v = detail::base_inverse(a, red, ctx);
  if (m == 1) return detail::make_report(std::move(v), 0, ctx, before);

  const BigNat one = 1;
  BigNat e, f;
  mul_into(e, a, v, ctx);
  red.reduce(e, e, m, ctx);
  sub_ui_into(e, e, 1, ctx);  // ab - 1, divisible by p
  red.sub(f, one, e, m, ctx);  // 2 - ab
  mul_into(v, v, f, ctx);
  red.reduce(v, v, m, ctx);
  unsigned n = 1;
  std::size_t precision = 2;
  ctx.step("explicit_prime_power", n, std::min(precision, m), v);
  while (precision < m) {
    sqr_into(e, e, ctx);
    red.reduce(e, e, m, ctx);
    add_ui_into(f, e, 1, ctx);
    mul_into(v, v, f, ctx);
    red.reduce(v, v, m, ctx);
    ++n;
    precision *= 2;
    ctx.step("explicit_prime_power", n, std::min(precision, m), v);
  }
  return detail::make_report(std::move(v), n, ctx, before);
}

/// Order-r iteration X <- X (1 + e + ... + e^{r-1}) with e = 1 - aX mod p^m,
/// the division-free form of X <- (1 - (1 - aX)^r) / a. Correct digits
/// multiply by r per step.
inline LiftReport rth_order_lift(const BigNat& a_in, const PrimePower& pp, unsigned r, CountingContext& ctx) {
  if (r < 2) throw std::domain_error("rth_order_lift: order must be >= 2");
  const BigNat a = detail::reduce_on_entry(a_in, pp);
  const OpTally before = ctx.tally;
  const std::size_t m = pp.m();
  detail::Reducer red(pp.p());
  BigNat x = detail::base_inverse(a, red, ctx);
  const BigNat one = 1;
  BigNat e, sum;
  unsigned iterations = 0;
  std::size_t precision = 1;
  while (precision < m) {
    mul_into(e, a, x, ctx);
    red.reduce(e, e, m, ctx);
    red.sub(e, one, e, m, ctx);
    sum = 1;
    for (unsigned j = 1; j < r; ++j) {
      mul_into(sum, sum, e, ctx);
      red.reduce(sum, sum, m, ctx);
      add_ui_into(sum, sum, 1, ctx);
    }
    mul_into(x, x, sum, ctx);
    red.reduce(x, x, m, ctx);
    ++iterations;
    precision = precision > m / r ? m : precision * r;
    ctx.step("rth_order", iterations, precision, x);
  }
  return detail::make_report(std::move(x), iterations, ctx, before);
}

/// Threshold-driven combination modulo 2^m: explicit formula up to
/// th.explicit_cutoff, otherwise recurse on ceil(m/2) and close with one
/// Newton step or, inside the Arazi band, one Arazi-Qi step. The Newton
/// step uses the full operand a; the truncated b = a mod 2^h would drop the
/// 2^h a_H r^2 term.
namespace detail {

[[gnu::noinline]] inline LiftReport hybrid_lift(const BigNat& a_in, std::size_t m, const Thresholds& th,
                                                CountingContext& ctx) {
  const OpTally before = ctx.tally;
  unsigned iterations = 0;
  if (limb_ready(a_in, ctx)) {
    check_pow2_input(a_in, m, "hybrid_inverse");
    BigNat u = limb::hybrid(a_in, m, th, iterations);
    return make_report(std::move(u), iterations, ctx, before);
  }
  const BigNat a = reduce_pow2_on_entry(a_in, m, "hybrid_inverse");
  BigNat u = ctx.enabled ? hybrid_engine(a, m, th, ctx, iterations) : limb::hybrid(a, m, th, iterations);
  return make_report(std::move(u), iterations, ctx, before);
}

}  // namespace detail

inline LiftReport hybrid_inverse(const BigNat& a_in, std::size_t m, const Thresholds& th, CountingContext& ctx) {
  th.validate();
  if (m <= std::max<std::size_t>(th.explicit_cutoff, 1)) return detail::explicit_2m_as(a_in, m, ctx, "hybrid_inverse");
  return detail::hybrid_lift(a_in, m, th, ctx);
}

// Uninstrumented overloads.

inline LiftReport arazi_qi_lift(const BigNat& a, std::size_t m) {
  CountingContext quiet;
  return arazi_qi_lift(a, m, quiet);
}
inline LiftReport hensel_iterative(const BigNat& a, const PrimePower& pp) {
  CountingContext quiet;
  return hensel_iterative(a, pp, quiet);
}
inline LiftReport hensel_recursive(const BigNat& a, const PrimePower& pp) {
  CountingContext quiet;
  return hensel_recursive(a, pp, quiet);
}
inline LiftReport hensel_product(const BigNat& a, const PrimePower& pp) {
  CountingContext quiet;
  return hensel_product(a, pp, quiet);
}
inline LiftReport explicit_2m(const BigNat& a, std::size_t m) {
  CountingContext quiet;
  return explicit_2m(a, m, quiet);
}
inline LiftReport explicit_prime_power(const BigNat& a, const PrimePower& pp) {
  CountingContext quiet;
  return explicit_prime_power(a, pp, quiet);
}
inline LiftReport rth_order_lift(const BigNat& a, const PrimePower& pp, unsigned r) {
  CountingContext quiet;
  return rth_order_lift(a, pp, r, quiet);
}
inline LiftReport hybrid_inverse(const BigNat& a, std::size_t m, const Thresholds& th = {}) {
  CountingContext quiet;
  return hybrid_inverse(a, m, th, quiet);
}

/// Runs `algo` on a modulo pp. Explicit dispatches to the prime-power form
/// for odd p; AraziQi and Hybrid require p = 2.
inline LiftReport lift(AlgoKind algo, const BigNat& a, const PrimePower& pp, CountingContext& ctx,
                       const Thresholds& th = {}) {
  using F = AlgoKind::Family;
  if (algo.binary_only() && !pp.is_binary()) {
    throw std::domain_error(algo.name() + " is only defined modulo 2^m");
  }
  if (pp.is_binary() && !is_odd(a)) throw NotInvertible(2);
  switch (algo.family()) {
    case F::AraziQi: return arazi_qi_lift(a, pp.m(), ctx);
    case F::HenselIterative: return hensel_iterative(a, pp, ctx);
    case F::HenselRecursive: return hensel_recursive(a, pp, ctx);
    case F::HenselProduct: return hensel_product(a, pp, ctx);
    case F::Explicit: return pp.is_binary() ? explicit_2m(a, pp.m(), ctx) : explicit_prime_power(a, pp, ctx);
    case F::Hybrid: return hybrid_inverse(a, pp.m(), th, ctx);
    case F::RthOrder: return rth_order_lift(a, pp, algo.order(), ctx);
  }
  throw std::invalid_argument("lift: unknown algorithm");
}

inline LiftReport lift(AlgoKind algo, const BigNat& a, const PrimePower& pp, const Thresholds& th = {}) {
  CountingContext quiet;
  return lift(algo, a, pp, quiet, th);
}

/// Every algorithm applicable to moduli with the given prime.
inline std::vector<AlgoKind> applicable_algorithms(bool binary) {
  using F = AlgoKind::Family;
  std::vector<AlgoKind> algos = {F::HenselIterative, F::HenselRecursive, F::HenselProduct, F::Explicit,
                                 AlgoKind::rth_order(2), AlgoKind::rth_order(3), AlgoKind::rth_order(4)};
  if (binary) {
    algos.insert(algos.begin(), F::AraziQi);
    algos.push_back(F::Hybrid);
  }
  return algos;
}

}  // namespace invmod

#endif  // INVMOD_LIFTING_HPP

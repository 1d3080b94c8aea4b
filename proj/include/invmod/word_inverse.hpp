#ifndef INVMOD_WORD_INVERSE_HPP
#define INVMOD_WORD_INVERSE_HPP

#include "invmod/counting.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace invmod {

/// Exponent m of a word-sized modulus 2^m, 1 <= m <= 64.
class WordExp {
 public:
  constexpr explicit WordExp(unsigned m) : m_(m) {
    if (m < 1 || m > 64) throw std::domain_error("WordExp: exponent must be in [1, 64]");
  }
  constexpr unsigned value() const { return m_; }
  /// 2^m - 1 without evaluating 2^64.
  constexpr std::uint64_t mask() const { return m_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m_) - 1; }

 private:
  unsigned m_;
};

/// Reduced residue modulo 2^m.
struct WordResidue {
  std::uint64_t value;
  WordExp m;

  friend bool operator==(const WordResidue& x, const WordResidue& y) {
    return x.value == y.value && x.m.value() == y.m.value();
  }
};

enum class WordAlgo { AraziQi, Hensel, Explicit };

constexpr std::string_view word_algo_name(WordAlgo algo) {
  switch (algo) {
    case WordAlgo::AraziQi: return "arazi_qi";
    case WordAlgo::Hensel: return "hensel";
    case WordAlgo::Explicit: return "explicit";
  }
  return "?";
}

/// Counter policy that compiles to nothing.
struct NoCount {
  constexpr void operator()(OpKind) const noexcept {}
};

/// Counter policy feeding an OpTally.
struct TallyCount {
  OpTally* tally;
  void operator()(OpKind kind) const { tally->add(kind); }
};

namespace detail {

inline void require_odd(std::uint64_t a) {
  if ((a & 1U) == 0) throw std::domain_error("word inverse: even operand has no inverse modulo 2^m");
}

constexpr std::uint64_t low_mask(unsigned i) { return i >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << i) - 1; }

}  // namespace detail

/// Arazi-Qi lifting on one machine word. The doubling loop overshoots for
/// non-power-of-two m and the final mask trims the result.
template <class Counter = NoCount>
WordResidue arazi_qi_word(std::uint64_t a, WordExp m, Counter count = {}) {
  detail::require_odd(a);
  std::uint64_t u = 1;
  for (unsigned i = 1; i < m.value(); i <<= 1) {
    const std::uint64_t mask = detail::low_mask(i);
    const std::uint64_t b = a & mask;
    count(OpKind::MaskOr);
    std::uint64_t t1 = u * b;
    count(OpKind::Mul);
    t1 >>= i;
    count(OpKind::Shift);
    std::uint64_t c = a >> i;
    count(OpKind::Shift);
    c &= mask;
    count(OpKind::MaskOr);
    std::uint64_t t2 = u * c;
    count(OpKind::Mul);
    t2 &= mask;
    count(OpKind::MaskOr);
    t1 += t2;
    count(OpKind::AddSub);
    t1 *= u;
    count(OpKind::Mul);
    t1 &= mask;
    count(OpKind::MaskOr);
    // -t1 mod 2^i; a plain 2^i - t1 would leave a stray bit when t1 = 0.
    t1 = (0 - t1) & mask;
    count(OpKind::AddSub);
    t1 <<= i;
    count(OpKind::Shift);
    u |= t1;
    count(OpKind::MaskOr);
  }
  u &= m.mask();
  count(OpKind::MaskOr);
  return {u, m};
}

/// Newton iteration U <- U(2 - aU) with masks in place of reductions.
template <class Counter = NoCount>
WordResidue hensel_word(std::uint64_t a, WordExp m, Counter count = {}) {
  detail::require_odd(a);
  std::uint64_t u = 1;  // a^{-1} mod 2
  count(OpKind::Egcd);
  for (unsigned i = 2; i < m.value(); i <<= 1) {
    const std::uint64_t mask = detail::low_mask(i);
    std::uint64_t temp = u * u;
    count(OpKind::Sqr);
    temp &= mask;
    count(OpKind::MaskOr);
    temp *= a;
    count(OpKind::Mul);
    temp &= mask;
    count(OpKind::MaskOr);
    u <<= 1;
    count(OpKind::Shift);
    u = (u - temp) & mask;
    count(OpKind::AddSub);
  }
  const std::uint64_t mask = m.mask();
  std::uint64_t temp = u * u;
  count(OpKind::Sqr);
  temp &= mask;
  count(OpKind::MaskOr);
  temp *= a;
  count(OpKind::Mul);
  temp &= mask;
  count(OpKind::MaskOr);
  u <<= 1;
  count(OpKind::Shift);
  u -= temp;
  count(OpKind::AddSub);
  u &= mask;
  count(OpKind::MaskOr);
  return {u, m};
}

/// Closed-form product (2 - a) * prod (1 + (a-1)^(2^i)) mod 2^m.
template <class Counter = NoCount>
WordResidue explicit_word(std::uint64_t a, WordExp m, Counter count = {}) {
  detail::require_odd(a);
  const std::uint64_t mask = m.mask();
  if ((a & mask) == 1) return {1, m};
  // a = 2^s t + 1
  const unsigned s = static_cast<unsigned>(std::countr_zero(a - 1));
  std::uint64_t u = 2 - a;
  count(OpKind::AddSub);
  std::uint64_t amone = a - 1;
  count(OpKind::AddSub);
  bool iterated = false;
  // i < m/s, compared without division
  for (std::uint64_t i = 1; i * s < m.value(); i <<= 1) {
    amone *= amone;
    count(OpKind::Sqr);
    amone &= mask;
    count(OpKind::MaskOr);
    const std::uint64_t factor = amone + 1;
    count(OpKind::AddSub);
    u *= factor;
    count(OpKind::Mul);
    u &= mask;
    count(OpKind::MaskOr);
    iterated = true;
  }
  if (!iterated) {
    u &= mask;
    count(OpKind::MaskOr);
  }
  return {u, m};
}

template <class Counter = NoCount>
WordResidue word_inverse(std::uint64_t a, WordExp m, WordAlgo algo = WordAlgo::Explicit, Counter count = {}) {
  switch (algo) {
    case WordAlgo::AraziQi: return arazi_qi_word(a, m, count);
    case WordAlgo::Hensel: return hensel_word(a, m, count);
    case WordAlgo::Explicit: return explicit_word(a, m, count);
  }
  throw std::invalid_argument("word_inverse: unknown algorithm");
}

}  // namespace invmod

#endif  // INVMOD_WORD_INVERSE_HPP

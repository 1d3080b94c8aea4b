#ifndef INVMOD_BIGNAT_HPP
#define INVMOD_BIGNAT_HPP

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace invmod {

/// Arbitrary-size nonnegative integer. All lifting code keeps values >= 0;
/// subtractions are either proven nonnegative or carried out modulo p^m.
using BigNat = mpz_class;

/// Number of significant bits (0 for zero).
inline std::size_t bit_length(const BigNat& x) {
  return mpz_sgn(x.get_mpz_t()) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline bool is_odd(const BigNat& x) { return mpz_odd_p(x.get_mpz_t()) != 0; }

inline BigNat pow2(std::size_t k) {
  BigNat r;
  mpz_setbit(r.get_mpz_t(), k);
  return r;
}

/// Parses a nonnegative decimal or 0x-prefixed hexadecimal literal.
inline BigNat parse_bignat(std::string_view text) {
  std::string s(text);
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    s = s.substr(2);
  }
  if (s.empty()) throw std::invalid_argument("empty integer literal");
  for (char c : s) {
    const bool ok = base == 10 ? (c >= '0' && c <= '9') : std::isxdigit(static_cast<unsigned char>(c)) != 0;
    if (!ok) throw std::invalid_argument("malformed integer literal: " + std::string(text));
  }
  return BigNat(s, base);
}

inline std::string to_hex(const BigNat& x) { return "0x" + x.get_str(16); }

/// Seeded source of random BigNat values, reproducible across runs.
class RandomBigNat {
 public:
  explicit RandomBigNat(std::uint64_t seed) : state_(gmp_randinit_mt) {
    state_.seed(static_cast<unsigned long>(seed));
  }

  /// Uniform value in [0, 2^bits).
  BigNat bits(std::size_t bits) { return state_.get_z_bits(static_cast<mp_bitcnt_t>(bits)); }

  /// Odd value with exactly `bits` significant bits (top and bottom bit set).
  BigNat odd_of_width(std::size_t bits) {
    if (bits == 0) throw std::domain_error("odd_of_width: width must be >= 1");
    BigNat x = state_.get_z_bits(static_cast<mp_bitcnt_t>(bits));
    mpz_setbit(x.get_mpz_t(), 0);
    mpz_setbit(x.get_mpz_t(), bits - 1);
    return x;
  }

  /// Uniform value in [0, n).
  BigNat below(const BigNat& n) { return state_.get_z_range(n); }

  std::uint64_t word() {
    BigNat x = state_.get_z_bits(64);
    std::uint64_t w = 0;
    mpz_export(&w, nullptr, -1, sizeof(w), 0, 0, x.get_mpz_t());
    return w;
  }

 private:
  gmp_randclass state_;
};

inline BigNat from_u64(std::uint64_t w) {
  BigNat x;
  mpz_import(x.get_mpz_t(), 1, -1, sizeof(w), 0, 0, &w);
  return x;
}

inline std::uint64_t to_u64(const BigNat& x) {
  if (bit_length(x) > 64) throw std::overflow_error("to_u64: value exceeds 64 bits");
  std::uint64_t w = 0;
  mpz_export(&w, nullptr, -1, sizeof(w), 0, 0, x.get_mpz_t());
  return w;
}

}  // namespace invmod

#endif  // INVMOD_BIGNAT_HPP

#ifndef INVMOD_TESTS_SUPPORT_HPP
#define INVMOD_TESTS_SUPPORT_HPP

#include "invmod/invmod.hpp"

#include <cstdint>

namespace invmod::test {

/// a^{-1} mod 2^m for m <= 64 by Euclid on 128-bit integers. Shares
/// nothing with the library.
inline std::uint64_t word_reference(std::uint64_t a, unsigned m) {
  const __int128 n = static_cast<__int128>(1) << m;
  __int128 r0 = n, r1 = static_cast<__int128>(a) % n;
  __int128 s0 = 0, s1 = 1;
  while (r1 != 0) {
    const __int128 q = r0 / r1;
    const __int128 r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    const __int128 s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) return 0;
  __int128 u = s0 % n;
  if (u < 0) u += n;
  return static_cast<std::uint64_t>(u);
}

/// (a*u - 1) mod modulus == 0.
inline bool is_inverse(const BigNat& a, const BigNat& u, const BigNat& modulus) {
  BigNat t = a * u - 1;
  return mpz_divisible_p(t.get_mpz_t(), modulus.get_mpz_t()) != 0;
}

inline BigNat reference_inverse(const BigNat& a, const BigNat& n) {
  return *oracle::oracle_inverse(a, n).inverse;
}

}  // namespace invmod::test

#endif  // INVMOD_TESTS_SUPPORT_HPP

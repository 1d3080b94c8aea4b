#ifndef INVMOD_ORACLE_HPP
#define INVMOD_ORACLE_HPP

// Slow reference inverses. Nothing here is shared with the lifting code
// paths, so the two cannot agree on a common bug.

#include "invmod/bignat.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>

namespace invmod::oracle {

struct OracleResult {
  std::optional<BigNat> inverse;
  /// gcd(a, n); 1 when invertible.
  BigNat gcd = 1;

  bool invertible() const { return inverse.has_value(); }
};

/// Textbook extended Euclid on (n, a mod n), tracking only the coefficient
/// of a. Result reduced to [0, n).
inline OracleResult oracle_inverse(const BigNat& a, const BigNat& n) {
  if (n < 2) throw std::domain_error("oracle_inverse: modulus must be >= 2");
  BigNat r0 = n;
  BigNat r1 = a % n;
  BigNat s0 = 0;
  BigNat s1 = 1;
  while (r1 != 0) {
    BigNat q = r0 / r1;
    BigNat r2 = r0 - q * r1;
    BigNat s2 = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0 != 1) return OracleResult{std::nullopt, r0};
  BigNat u = s0 % n;
  if (u < 0) u += n;
  return OracleResult{u, 1};
}

/// Brute-force scan of u in [0, n). Only for n <= 2^20.
inline OracleResult exhaustive_inverse(std::uint64_t a, std::uint64_t n) {
  if (n < 2 || n > (std::uint64_t{1} << 20)) throw std::domain_error("exhaustive_inverse: need 2 <= n <= 2^20");
  const std::uint64_t ar = a % n;
  for (std::uint64_t u = 0; u < n; ++u) {
    if ((ar * u) % n == 1) return OracleResult{BigNat(static_cast<unsigned long>(u)), 1};
  }
  std::uint64_t x = n, y = ar;
  while (y != 0) {
    const std::uint64_t t = x % y;
    x = y;
    y = t;
  }
  return OracleResult{std::nullopt, BigNat(static_cast<unsigned long>(x))};
}

}  // namespace invmod::oracle

#endif  // INVMOD_ORACLE_HPP

#include "support.hpp"

#include <gtest/gtest.h>

namespace invmod {
namespace {

TEST(Oracle, Examples) {
  EXPECT_EQ(*oracle::oracle_inverse(3, 256).inverse, 171);
  EXPECT_EQ(*oracle::exhaustive_inverse(3, 256).inverse, 171);
  EXPECT_EQ(*oracle::oracle_inverse(1, BigNat("123456789012345678901")).inverse, 1);
  const auto r = oracle::oracle_inverse(4, 8);
  EXPECT_FALSE(r.invertible());
  EXPECT_EQ(r.gcd, 4);
  EXPECT_THROW(oracle::oracle_inverse(3, 1), std::domain_error);
}

TEST(Oracle, ExhaustiveExamples) {
  EXPECT_EQ(*oracle::exhaustive_inverse(7, 32).inverse, 23);
  EXPECT_EQ(*oracle::exhaustive_inverse(1, 2).inverse, 1);
  const auto r = oracle::exhaustive_inverse(6, 9);
  EXPECT_FALSE(r.invertible());
  EXPECT_EQ(r.gcd, 3);
  EXPECT_THROW(oracle::exhaustive_inverse(1, 1), std::domain_error);
  EXPECT_THROW(oracle::exhaustive_inverse(1, (1U << 20) + 1), std::domain_error);
}

// Every a for a sampled set of moduli up to 2^14.
TEST(Oracle, AgreesWithExhaustiveScan) {
  std::vector<std::uint64_t> moduli;
  for (std::uint64_t n = 2; n <= 300; ++n) moduli.push_back(n);
  for (std::uint64_t n = 301; n <= (1U << 14); n = n * 9 / 8 + 1) moduli.push_back(n);
  moduli.push_back(1U << 14);
  for (std::uint64_t n : moduli) {
    for (std::uint64_t a = 0; a < n; a += (n > 2000 ? 7 : 1)) {
      const auto x = oracle::oracle_inverse(static_cast<unsigned long>(a), static_cast<unsigned long>(n));
      const auto y = oracle::exhaustive_inverse(a, n);
      ASSERT_EQ(x.invertible(), y.invertible()) << a << " mod " << n;
      ASSERT_EQ(x.gcd, y.gcd) << a << " mod " << n;
      if (x.invertible()) ASSERT_EQ(*x.inverse, *y.inverse) << a << " mod " << n;
    }
  }
}

TEST(Oracle, AgreesWithEgcd) {
  RandomBigNat rng(42);
  int invertible = 0;
  for (int i = 0; i < 10000; ++i) {
    const BigNat n = rng.bits(8 + i % 500) + 2;
    const BigNat a = rng.below(n * 3);
    const auto want = oracle::oracle_inverse(a, n);
    if (want.invertible()) {
      ++invertible;
      ASSERT_EQ(egcd_inverse(a, n), *want.inverse);
    } else {
      try {
        (void)egcd_inverse(a, n);
        FAIL() << "egcd accepted a non-invertible input";
      } catch (const NotInvertible& e) {
        ASSERT_EQ(e.gcd(), want.gcd);
      }
    }
  }
  EXPECT_GT(invertible, 3000);
}

}  // namespace
}  // namespace invmod

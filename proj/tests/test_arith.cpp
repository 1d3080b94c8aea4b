#include "support.hpp"

#include <gtest/gtest.h>

namespace invmod {
namespace {

TEST(Arith, MulExamples) {
  CountingContext ctx;
  EXPECT_EQ(mul(0, 17, ctx), 0);
  EXPECT_EQ(mul(1, 98765, ctx), 98765);
  EXPECT_EQ(mul(3, 171, ctx), 513);
}

TEST(Arith, SqrExamples) {
  CountingContext ctx;
  EXPECT_EQ(sqr(0, ctx), 0);
  EXPECT_EQ(sqr(1, ctx), 1);
  const BigNat x("12297829382473034411");
  EXPECT_EQ(sqr(x, ctx), mul(x, x, ctx));
  EXPECT_EQ(sqr(x, ctx), BigNat("151236607520417094880809489557990116921"));
}

TEST(Arith, MaskExamples) {
  CountingContext ctx;
  EXPECT_EQ(mask_low_bits(513, 8, ctx), 1);
  EXPECT_EQ(mask_low_bits(BigNat("123456789123456789"), 0, ctx), 0);
  EXPECT_EQ(mask_low_bits(5, 64, ctx), 5);
}

TEST(Arith, ShiftExamples) {
  CountingContext ctx;
  EXPECT_EQ(shift(513, -8, ctx), 2);
  EXPECT_EQ(shift(1, 0, ctx), 1);
  EXPECT_EQ(shift(3, 4, ctx), 48);
}

TEST(Arith, ModReduceExamples) {
  CountingContext ctx;
  EXPECT_EQ(mod_reduce(245, 81, ctx), 2);
  EXPECT_EQ(mod_reduce(BigNat("98765432109876543210"), 1, ctx), 0);
  EXPECT_EQ(mod_reduce(126, 25, ctx), 1);
  EXPECT_THROW(mod_reduce(5, 0, ctx), std::domain_error);
}

TEST(Arith, PowPrime) {
  CountingContext ctx;
  EXPECT_EQ(pow_prime(2, 10, ctx), 1024);
  EXPECT_EQ(pow_prime(3, 4, ctx), 81);
  EXPECT_EQ(pow_prime(5, 0, ctx), 1);
  BigNat want;
  mpz_ui_pow_ui(want.get_mpz_t(), 65537, 37);
  EXPECT_EQ(pow_prime(65537, 37, ctx), want);
}

TEST(Arith, TrailingZeros) {
  EXPECT_EQ(trailing_zeros(2), 1U);
  EXPECT_EQ(trailing_zeros(96), 5U);
  EXPECT_EQ(trailing_zeros(7), 0U);
  EXPECT_EQ(trailing_zeros(pow2(4000)), 4000U);
  EXPECT_THROW(trailing_zeros(0), std::domain_error);
}

TEST(Arith, MaskMatchesReduction) {
  RandomBigNat rng(7);
  CountingContext ctx;
  for (std::size_t k = 0; k <= 4096; k += 37) {
    const BigNat x = rng.bits(2 * k + 50);
    EXPECT_EQ(mask_low_bits(x, k, ctx), mod_reduce(x, pow2(k), ctx)) << "k=" << k;
  }
}

TEST(Arith, SqrMatchesMulBothBackends) {
  RandomBigNat rng(11);
  for (MulBackend backend : {MulBackend::Native, MulBackend::Schoolbook}) {
    const ScopedMulBackend scope(backend);
    CountingContext ctx;
    for (std::size_t bits : {1, 63, 64, 65, 500, 4096, 20000}) {
      const BigNat x = rng.bits(bits);
      const BigNat y = rng.bits(bits / 2 + 3);
      EXPECT_EQ(sqr(x, ctx), BigNat(x * x));
      EXPECT_EQ(mul(x, y, ctx), BigNat(x * y));
    }
  }
}

TEST(Arith, SchoolbookAliasing) {
  const ScopedMulBackend scope(MulBackend::Schoolbook);
  RandomBigNat rng(12);
  CountingContext ctx;
  BigNat x = rng.bits(3000);
  const BigNat y = rng.bits(1000);
  const BigNat want = x * y;
  mul_into(x, x, y, ctx);
  EXPECT_EQ(x, want);
  BigNat z = rng.bits(777);
  const BigNat zz = z * z;
  sqr_into(z, z, ctx);
  EXPECT_EQ(z, zz);
}

TEST(Arith, InstrumentationIsTransparent) {
  RandomBigNat rng(3);
  const BigNat x = rng.bits(900), y = rng.bits(700), n = rng.bits(300) + 1;
  CountingContext off;
  CountingContext on(true);
  on.probe_width = true;
  EXPECT_EQ(mul(x, y, off), mul(x, y, on));
  EXPECT_EQ(sqr(x, off), sqr(x, on));
  EXPECT_EQ(mask_low_bits(x, 100, off), mask_low_bits(x, 100, on));
  EXPECT_EQ(shift(x, -33, off), shift(x, -33, on));
  EXPECT_EQ(mod_reduce(x, n, off), mod_reduce(x, n, on));
  EXPECT_EQ(off.tally.total(), 0U);
  EXPECT_EQ(on.tally.mul, 1U);
  EXPECT_EQ(on.tally.sqr, 1U);
  EXPECT_EQ(on.tally.mask_or, 1U);
  EXPECT_EQ(on.tally.shift, 1U);
  EXPECT_EQ(on.tally.mod_reduce, 1U);
  EXPECT_EQ(on.tally.total(), 5U);
}

TEST(Arith, TallySince) {
  OpTally a;
  a.add(OpKind::Mul);
  a.add(OpKind::Mul);
  OpTally b = a;
  b.add(OpKind::Egcd);
  const OpTally d = b.since(a);
  EXPECT_EQ(d.egcd, 1U);
  EXPECT_EQ(d.total(), 1U);
}

TEST(Arith, Deterministic) {
  RandomBigNat r1(99), r2(99);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(r1.odd_of_width(300), r2.odd_of_width(300));
  RandomBigNat r3(5);
  const BigNat v = r3.odd_of_width(300);
  EXPECT_TRUE(is_odd(v));
  EXPECT_EQ(bit_length(v), 300U);
}

TEST(Arith, ParseBigNat) {
  EXPECT_EQ(parse_bignat("171"), 171);
  EXPECT_EQ(parse_bignat("0xff"), 255);
  EXPECT_EQ(parse_bignat("0XFF"), 255);
  EXPECT_THROW(parse_bignat(""), std::invalid_argument);
  EXPECT_THROW(parse_bignat("-3"), std::invalid_argument);
  EXPECT_THROW(parse_bignat("12a"), std::invalid_argument);
  EXPECT_THROW(parse_bignat("0x"), std::invalid_argument);
}

TEST(Arith, PowerCacheCountsMisses) {
  PowerCache cache(3);
  CountingContext ctx(true);
  EXPECT_EQ(cache.get(4, ctx), 81);
  const auto first = ctx.tally.total();
  EXPECT_GT(first, 0U);
  EXPECT_EQ(cache.get(4, ctx), 81);
  EXPECT_EQ(ctx.tally.total(), first);
}

}  // namespace
}  // namespace invmod

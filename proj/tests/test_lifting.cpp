#include "support.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace invmod {
namespace {

using F = AlgoKind::Family;

PrimePower pp(unsigned long p, std::size_t m) { return PrimePower(p, m); }

TEST(Lifting, EgcdExamples) {
  EXPECT_EQ(egcd_inverse(7, 5), 3);
  EXPECT_EQ(egcd_inverse(1, BigNat("1000000000000000000000")), 1);
  try {
    (void)egcd_inverse(6, 9);
    FAIL() << "expected NotInvertible";
  } catch (const NotInvertible& e) {
    EXPECT_EQ(e.gcd(), 3);
    EXPECT_STREQ(e.what(), "not invertible: gcd=3");
  }
}

TEST(Lifting, AraziQiExamples) {
  EXPECT_EQ(arazi_qi_lift(3, 256).inverse, test::reference_inverse(3, pow2(256)));
  EXPECT_EQ(arazi_qi_lift(1, 1000).inverse, 1);
  EXPECT_THROW(arazi_qi_lift(6, 10), std::domain_error);
}

TEST(Lifting, HenselExamples) {
  EXPECT_EQ(hensel_iterative(7, pp(3, 4)).inverse, 58);
  EXPECT_EQ(hensel_recursive(7, pp(3, 4)).inverse, 58);
  EXPECT_EQ(hensel_product(7, pp(3, 4)).inverse, 58);
  EXPECT_EQ(test::reference_inverse(7, 81), 58);
  EXPECT_EQ(hensel_iterative(1, pp(5, 30)).inverse, 1);
  EXPECT_EQ(hensel_recursive(1, pp(2, 300)).inverse, 1);
  for (unsigned long a : {2UL, 4UL, 13UL, 1000UL}) {
    EXPECT_EQ(hensel_recursive(a, pp(17, 1)).inverse, egcd_inverse(a, 17));
  }
  EXPECT_THROW(hensel_iterative(6, pp(3, 4)), NotInvertible);
  EXPECT_THROW(hensel_recursive(6, pp(3, 4)), NotInvertible);
}

TEST(Lifting, ExplicitExamples) {
  EXPECT_EQ(explicit_2m(3, 4).inverse, 11);
  EXPECT_EQ(explicit_2m(1, 777).inverse, 1);
  EXPECT_EQ(explicit_prime_power(7, pp(5, 2)).inverse, 18);
  EXPECT_EQ(test::reference_inverse(7, 25), 18);
  EXPECT_EQ(explicit_prime_power(7, pp(5, 1)).inverse, egcd_inverse(7, 5));
  EXPECT_EQ(explicit_prime_power(7, pp(3, 4)).inverse, 58);
  EXPECT_THROW(explicit_prime_power(10, pp(5, 3)), NotInvertible);
  EXPECT_THROW(explicit_2m(10, 8), std::domain_error);
}

TEST(Lifting, ExplicitOpCount) {
  CountingContext ctx(true);
  const LiftReport r = explicit_2m(3, 64, ctx);
  EXPECT_EQ(r.tally.total(), 32U);
}

TEST(Lifting, RthOrderExamples) {
  EXPECT_EQ(rth_order_lift(7, pp(3, 4), 2).inverse, 58);
  EXPECT_EQ(rth_order_lift(7, pp(3, 4), 3).inverse, 58);
  EXPECT_EQ(rth_order_lift(1, pp(7, 20), 4).inverse, 1);
  EXPECT_THROW(rth_order_lift(7, pp(3, 4), 1), std::domain_error);
  EXPECT_THROW(rth_order_lift(9, pp(3, 4), 2), NotInvertible);
}

TEST(Lifting, HybridExamples) {
  EXPECT_EQ(hybrid_inverse(3, 640).inverse, test::reference_inverse(3, pow2(640)));
  EXPECT_EQ(hybrid_inverse(1, 1000000).inverse, 1);
  RandomBigNat rng(31);
  for (std::size_t m : {100U, 700U, 10000U}) {
    for (int i = 0; i < 50; ++i) {
      const BigNat a = rng.odd_of_width(m);
      ASSERT_EQ(hybrid_inverse(a, m).inverse, egcd_inverse(a, pow2(m))) << "m=" << m;
    }
  }
  // Arazi band and Newton levels both in play.
  const Thresholds th{64, 200, 3000};
  for (std::size_t m : {65U, 300U, 2999U, 3001U, 9000U}) {
    const BigNat a = rng.odd_of_width(m + 40);
    ASSERT_EQ(hybrid_inverse(a, m, th).inverse, test::reference_inverse(a, pow2(m))) << "m=" << m;
  }
}

TEST(Lifting, ReducesLargeInputs) {
  const BigNat a = BigNat(7) + BigNat(81) * BigNat("1000000000000");
  EXPECT_EQ(hensel_recursive(a, pp(3, 4)).inverse, 58);
  const BigNat b = BigNat(3) + pow2(300);
  EXPECT_EQ(explicit_2m(b, 8).inverse, 171);
  EXPECT_EQ(arazi_qi_lift(b, 8).inverse, 171);
}

TEST(Lifting, PrimePowerValidation) {
  EXPECT_THROW(PrimePower(1, 3), std::domain_error);
  EXPECT_THROW(PrimePower(9, 3), std::domain_error);
  EXPECT_THROW(PrimePower(3, 0), std::domain_error);
  EXPECT_EQ(PrimePower(5, 3).modulus(), 125);
  EXPECT_TRUE(PrimePower::binary(5).is_binary());
}

TEST(Lifting, AlgoKindNames) {
  for (AlgoKind k : applicable_algorithms(true)) EXPECT_EQ(AlgoKind::parse(k.name()), k);
  EXPECT_EQ(AlgoKind::parse("rth_order"), AlgoKind::rth_order(3));
  EXPECT_EQ(AlgoKind::parse("rth_order4").order(), 4U);
  EXPECT_THROW(AlgoKind::parse("newton"), std::invalid_argument);
  EXPECT_THROW(AlgoKind::rth_order(1), std::domain_error);
  EXPECT_THROW(lift(F::AraziQi, 5, pp(3, 4)), std::domain_error);
  EXPECT_THROW(lift(F::HenselRecursive, 4, pp(2, 4)), NotInvertible);
}

TEST(Lifting, UniversalCorrectness) {
  RandomBigNat rng(1234);
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL, 65537UL}) {
    for (std::size_t m : {1U, 2U, 3U, 5U, 16U, 31U, 64U, 129U, 1000U, 4096U}) {
      if (p == 65537 && m > 1000) continue;
      const PrimePower mod(p, m);
      for (int i = 0; i < 3; ++i) {
        BigNat a = rng.below(mod.modulus());
        if (mpz_divisible_ui_p(a.get_mpz_t(), p) != 0) a += 1;
        const BigNat want = test::reference_inverse(a, mod.modulus());
        for (AlgoKind algo : applicable_algorithms(mod.is_binary())) {
          const BigNat got = lift(algo, a, mod).inverse;
          ASSERT_EQ(got, want) << algo.name() << " p=" << p << " m=" << m;
          ASSERT_GE(got, 0);
          ASSERT_LT(got, mod.modulus());
        }
      }
    }
  }
}

// After k Newton steps from a correct base mod p the iterate is an inverse
// modulo p^{2^k}.
TEST(Lifting, QuadraticConvergence) {
  RandomBigNat rng(8);
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL}) {
    const PrimePower mod(p, 256);
    BigNat a = rng.below(mod.modulus());
    if (mpz_divisible_ui_p(a.get_mpz_t(), p) != 0) a += 1;
    for (AlgoKind algo : {AlgoKind(F::HenselIterative), AlgoKind(F::HenselRecursive), AlgoKind(F::HenselProduct)}) {
      CountingContext ctx(true);
      unsigned seen = 0;
      ctx.on_step = [&](const StepEvent& ev) {
        ++seen;
        const std::size_t k = ev.step;
        ASSERT_LE(k, 8U);
        EXPECT_EQ(ev.precision, std::size_t{1} << k) << algo.name();
        BigNat pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), p, std::size_t{1} << k);
        EXPECT_TRUE(test::is_inverse(a, ev.iterate, pk)) << algo.name() << " p=" << p << " k=" << k;
      };
      (void)lift(algo, a, mod, ctx);
      EXPECT_EQ(seen, 8U) << algo.name();
    }
  }
}

TEST(Lifting, RthOrderConvergence) {
  RandomBigNat rng(9);
  for (unsigned r = 2; r <= 4; ++r) {
    for (unsigned long p : {2UL, 3UL, 5UL}) {
      const std::size_t m = r * r * r * r;
      const PrimePower mod(p, m);
      BigNat a = rng.below(mod.modulus());
      if (mpz_divisible_ui_p(a.get_mpz_t(), p) != 0) a += 1;
      CountingContext ctx(true);
      unsigned seen = 0;
      ctx.on_step = [&](const StepEvent& ev) {
        ++seen;
        std::size_t rn = 1;
        for (unsigned j = 0; j < ev.step; ++j) rn *= r;
        EXPECT_EQ(ev.precision, rn);
        BigNat prn;
        mpz_ui_pow_ui(prn.get_mpz_t(), p, rn);
        EXPECT_TRUE(test::is_inverse(a, ev.iterate, prn)) << "r=" << r << " p=" << p << " n=" << ev.step;
      };
      const BigNat x = rth_order_lift(a, mod, r, ctx).inverse;
      EXPECT_EQ(seen, 4U);
      EXPECT_EQ(x, test::reference_inverse(a, mod.modulus()));
    }
  }
}

TEST(Lifting, ExplicitIdentityEveryIteration) {
  RandomBigNat rng(10);
  for (std::size_t m : {5U, 64U, 100U, 1024U}) {
    const BigNat mod = pow2(m);
    for (int i = 0; i < 20; ++i) {
      BigNat a = rng.odd_of_width(m);
      if (i % 4 == 0) a = (a << 5) + 1;  // larger s
      a = a % mod;
      CountingContext ctx(true);
      unsigned seen = 0;
      ctx.on_step = [&](const StepEvent& ev) {
        ++seen;
        BigNat e = pow2(ev.precision), h;
        const BigNat amone = a - 1;
        mpz_powm(h.get_mpz_t(), amone.get_mpz_t(), e.get_mpz_t(), mod.get_mpz_t());
        BigNat lhs = (a * ev.iterate) % mod;
        BigNat rhs = (BigNat(1) - h) % mod;
        if (rhs < 0) rhs += mod;
        EXPECT_EQ(lhs, rhs) << "m=" << m << " n=" << ev.precision;
        EXPECT_LT(ev.iterate, mod);
      };
      const BigNat u = explicit_2m(a, m, ctx).inverse;
      EXPECT_EQ(u, test::reference_inverse(a, mod));
      if (a != 1) EXPECT_GT(seen, 0U);
    }
  }
}

// Doubling methods only touch values proportional to the current
// precision; the explicit formula always works at full width.
TEST(Lifting, WidthProbe) {
  RandomBigNat rng(13);
  const std::size_t m = 4096;
  const BigNat a = rng.odd_of_width(m);
  const auto probe = [&](AlgoKind algo, std::size_t slack_factor) {
    CountingContext ctx(true);
    ctx.probe_width = true;
    ctx.on_step = [&](const StepEvent& ev) {
      EXPECT_GT(ev.peak_bits, 0U);
      EXPECT_LE(ev.peak_bits, slack_factor * ev.precision + 64) << algo.name() << " precision " << ev.precision;
    };
    (void)lift(algo, a, PrimePower::binary(m), ctx);
  };
  probe(F::AraziQi, 1);
  probe(F::HenselIterative, 2);
  probe(F::HenselRecursive, 2);

  CountingContext ctx(true);
  ctx.probe_width = true;
  ctx.on_step = [&](const StepEvent& ev) {
    EXPECT_LE(ev.peak_bits, 2 * m + 1);
    EXPECT_LE(bit_length(ev.iterate), m);
  };
  (void)explicit_2m(a, m, ctx);
}

TEST(Lifting, InstrumentationDoesNotChangeResults) {
  RandomBigNat rng(14);
  const PrimePower mod(3, 300);
  const BigNat a = rng.below(mod.modulus()) * 3 + 1;
  for (AlgoKind algo : applicable_algorithms(false)) {
    CountingContext on(true);
    on.probe_width = true;
    EXPECT_EQ(lift(algo, a, mod, on).inverse, lift(algo, a, mod).inverse);
    EXPECT_GT(on.tally.total(), 0U);
  }
}

TEST(Lifting, FastPathMatchesCountedPath) {
  // Uncounted calls take the limb path; counted ones go op by op.
  RandomBigNat rng(15);
  const std::vector<Thresholds> ths{{}, {64, 200, 3000}, {0, 0, 100000}, {1, 1, 1}, {100, 100, 100}};
  for (MulBackend be : {MulBackend::Native, MulBackend::Schoolbook}) {
    ScopedMulBackend guard(be);
    for (std::size_t m : {1, 2, 3, 63, 64, 65, 127, 128, 129, 257, 1000, 1025, 4096}) {
      for (std::size_t extra : {0, 30, 60}) {
        const BigNat a = rng.odd_of_width(m + extra);
        const BigNat want = *oracle::oracle_inverse(a, pow2(m)).inverse;
        auto check = [&](const LiftReport& fast, const LiftReport& counted) {
          EXPECT_EQ(fast.inverse, want) << "m=" << m;
          EXPECT_EQ(counted.inverse, want) << "m=" << m;
          EXPECT_EQ(fast.iterations, counted.iterations) << "m=" << m;
        };
        CountingContext on(true);
        check(arazi_qi_lift(a, m), arazi_qi_lift(a, m, on));
        check(hensel_recursive(a, PrimePower::binary(m)), hensel_recursive(a, PrimePower::binary(m), on));
        check(explicit_2m(a, m), explicit_2m(a, m, on));
        for (const Thresholds& th : ths) check(hybrid_inverse(a, m, th), hybrid_inverse(a, m, th, on));
      }
    }
  }
}

TEST(Lifting, TalliesArePerCall) {
  CountingContext ctx(true);
  const LiftReport first = hensel_recursive(7, pp(3, 4), ctx);
  const LiftReport second = hensel_recursive(7, pp(3, 4), ctx);
  EXPECT_EQ(first.tally, second.tally);
  EXPECT_EQ(ctx.tally.total(), 2 * first.tally.total());
}

TEST(Lifting, OpCountFormulas) {
  for (std::size_t m : {8U, 64U, 1024U}) {
    const std::size_t lg = static_cast<std::size_t>(std::countr_zero(m));
    CountingContext c1(true), c2(true), c3(true);
    EXPECT_EQ(arazi_qi_lift(3, m, c1).tally.total(), 13 * lg + 1);
    EXPECT_EQ(hensel_iterative(3, PrimePower::binary(m), c2).tally.total(), 6 * lg + 2);
    EXPECT_EQ(explicit_2m(3, m, c3).tally.total(), 5 * lg + 2);
  }
}

}  // namespace
}  // namespace invmod

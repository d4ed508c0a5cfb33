#include "abclll/numt.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"

namespace abclll {
namespace {

bool gmp_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0; }

Int mersenne(unsigned long e) { return pow(Int(2), e) - 1; }

TEST(IsPrime, AgreesWithTrialDivisionBelowOneMillion) {
  for (std::uint64_t n = 0; n < 1'000'000; ++n) {
    ASSERT_EQ(is_prime(Int(static_cast<unsigned long>(n))), oracle::prime_by_trial_division(n)) << n;
  }
}

TEST(IsPrime, StrongPseudoprimes) {
  EXPECT_FALSE(is_prime(Int(561)));
  EXPECT_FALSE(is_prime(Int("3215031751")));
  EXPECT_FALSE(is_prime(Int("3825123056546413051")));
  // Passes the first twelve prime bases.
  EXPECT_FALSE(is_prime(Int("318665857834031151167461")));
  // Passes the first thirteen prime bases; decided by the Lucas test.
  EXPECT_FALSE(is_prime(Int("3317044064679887385961981")));
  EXPECT_EQ(Int("318665857834031151167461"), Int("399165290221") * Int("798330580441"));
}

TEST(IsPrime, MersenneNumbers) {
  for (unsigned long e : {31ul, 61ul, 89ul, 107ul, 127ul, 521ul, 607ul}) EXPECT_TRUE(is_prime(mersenne(e))) << e;
  for (unsigned long e : {11ul, 67ul, 101ul, 137ul, 257ul}) EXPECT_FALSE(is_prime(mersenne(e))) << e;
}

TEST(IsPrime, LargeRandomAgreeWithGmp) {
  std::mt19937_64 rng(41);
  gmp_randclass r(gmp_randinit_default);
  r.seed(41);
  int primes = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const unsigned long bits = 65 + trial % 200;
    Int n = r.get_z_bits(bits) | 1;
    const bool expected = gmp_prime(n);
    primes += expected;
    ASSERT_EQ(is_prime(n), expected) << n;
  }
  EXPECT_GT(primes, 10);
}

TEST(IsPrime, SmallEdgeCases) {
  EXPECT_FALSE(is_prime(Int(-7)));
  EXPECT_FALSE(is_prime(Int(0)));
  EXPECT_FALSE(is_prime(Int(1)));
  EXPECT_TRUE(is_prime(Int(2)));
  EXPECT_TRUE(is_prime(from_u64(18446744073709551557ull)));
  EXPECT_FALSE(is_prime(from_u64(18446744073709551615ull)));
}

TEST(Factorize, WorkedRelationCoefficients) {
  EXPECT_EQ(factorize(149459713), Factorization::from_factors({{13, 4}, {5233, 1}}));
  EXPECT_EQ(factorize(336633577), Factorization::from_factors({{7, 3}, {981439, 1}}));
  EXPECT_EQ(factorize(1).value(), 1);
  EXPECT_TRUE(factorize(1).is_one());
  EXPECT_THROW(factorize(0), std::invalid_argument);
}

TEST(Factorize, PropertyRoundTripBelow2To64) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 10'000; ++trial) {
    std::uint64_t v = rng();
    if (trial % 4 == 1) v >>= rng() % 60;
    if (v == 0) v = 1;
    const Int n = from_u64(v);
    const Factorization f = factorize(n);
    ASSERT_EQ(f.value(), n);
    for (std::size_t i = 0; i < f.factors().size(); ++i) {
      ASSERT_TRUE(gmp_prime(f.factors()[i].prime)) << n;
      ASSERT_GT(f.factors()[i].exponent, 0u);
      if (i) ASSERT_LT(f.factors()[i - 1].prime, f.factors()[i].prime);
    }
  }
}

TEST(Factorize, SemiprimesOfThirtyTwoBitPrimes) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    Int p = from_u64((rng() >> 33) | (1ull << 30)), q = from_u64((rng() >> 33) | (1ull << 30));
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    const Factorization f = factorize(p * q);
    EXPECT_EQ(f.value(), p * q);
    EXPECT_EQ(f, multiply(Factorization::prime_power(p, 1), Factorization::prime_power(q, 1)));
  }
}

TEST(Factorize, BeyondSixtyFourBits) {
  const Int big = pow(Int(71), 8) * pow(Int(3), 38) * 32 * pow(Int(5), 18) * pow(Int(17), 3);
  EXPECT_EQ(factorize(big), Factorization::from_factors({{2, 5}, {3, 38}, {5, 18}, {17, 3}, {71, 8}}));

  const Int p61 = mersenne(61), p89 = mersenne(89);
  EXPECT_EQ(factorize(p89), Factorization::prime_power(p89, 1));
  EXPECT_EQ(factorize(p61 * p61 * 1000003), Factorization::from_factors({{p61, 2}, {1000003, 1}}));

  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    Int p = from_u64(rng() >> 24), q = from_u64(rng() >> 20);
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    mpz_nextprime(q.get_mpz_t(), q.get_mpz_t());
    const Int n = p * q * 1024 * 3;
    const Factorization f = factorize(n);
    EXPECT_EQ(f.value(), n);
    for (const auto& pp : f.factors()) EXPECT_TRUE(gmp_prime(pp.prime));
  }
}

TEST(Factorize, ResistantCofactorReported) {
  const Int p = mersenne(61), q = mersenne(89);
  FactorEffort weak{1000, 2000};
  try {
    factorize(p * q * 12, weak);
    FAIL() << "expected IncompleteFactorization";
  } catch (const IncompleteFactorization& e) {
    EXPECT_EQ(e.cofactor(), p * q);
    EXPECT_EQ(e.factored(), Factorization::from_factors({{2, 2}, {3, 1}}));
  }
  const Int a = from_u64(4294967291ull), b = from_u64(4294967279ull);
  try {
    factorize(a * b * 5, FactorEffort{100, 10});
    FAIL() << "expected IncompleteFactorization";
  } catch (const IncompleteFactorization& e) {
    EXPECT_EQ(e.cofactor(), a * b);
    EXPECT_EQ(e.factored(), Factorization::prime_power(5, 1));
  }
}

TEST(FactoredArithmetic, MultiplyDivideGcd) {
  const Factorization x = Factorization::from_factors({{2, 3}, {5, 1}, {7, 2}});
  const Factorization y = Factorization::from_factors({{2, 1}, {3, 4}, {7, 5}});
  EXPECT_EQ(multiply(x, y).value(), x.value() * y.value());
  EXPECT_EQ(divide_exact(multiply(x, y), y), x);
  EXPECT_EQ(gcd_factored(x, y), Factorization::from_factors({{2, 1}, {7, 2}}));
  EXPECT_THROW(divide_exact(x, y), std::invalid_argument);
  EXPECT_THROW(Factorization::from_factors({{1, 2}}), std::invalid_argument);
  EXPECT_EQ(Factorization::from_factors({{3, 1}, {2, 2}, {3, 2}, {5, 0}}),
            Factorization::from_factors({{2, 2}, {3, 3}}));
}

TEST(FactoredArithmetic, PropertyRadicalAndGcdAgreeWithIntegers) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    const Int a = oracle::random_int(rng, 1, 1'000'000), b = oracle::random_int(rng, 1, 1'000'000),
              c = oracle::random_int(rng, 1, 1'000'000);
    const Factorization fa = factorize(a), fb = factorize(b), fc = factorize(c);
    ASSERT_EQ(gcd_factored(fa, fb).value(), gcd(a, b));
    // rad(abc) is the largest squarefree divisor of abc.
    const Int abc = a * b * c;
    const Factorization rad = radical(fa, fb, fc);
    ASSERT_EQ(Int(abc % rad.value()), 0);
    Int rad_oracle = 1;
    const Factorization fabc = factorize(abc);
    for (const auto& pp : fabc.factors()) rad_oracle *= pp.prime;
    ASSERT_EQ(rad.value(), rad_oracle);
    for (const auto& pp : rad.factors()) ASSERT_EQ(pp.exponent, 1u);
  }
}

TEST(Logarithms, MatchHighPrecisionOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const Int n = oracle::random_int(rng, 2, INT64_MAX) * oracle::random_int(rng, 1, INT64_MAX) + trial;
    const long double ref = oracle::mpfr_log(n);
    ASSERT_NEAR(static_cast<double>(log_of(n)), static_cast<double>(ref), 1e-12 * static_cast<double>(ref));
  }
  const Factorization f = Factorization::from_factors({{2, 5}, {3, 38}, {5, 18}, {17, 3}});
  EXPECT_NEAR(static_cast<double>(log_value(f)), static_cast<double>(oracle::mpfr_log(f.value())), 1e-12);
  EXPECT_EQ(log_value(Factorization()), 0.0L);
}

TEST(SmoothSets, SmallExamples) {
  EXPECT_EQ(smooth_numbers(20, 4).values(), (std::vector<Int>{1, 2, 3, 4, 6, 8, 9, 12, 16, 18}));
  EXPECT_EQ(prime_powers(30, 6, false).values(), (std::vector<Int>{2, 3, 4, 5, 8, 9, 16, 25, 27}));
  EXPECT_EQ(prime_powers(10, 6, true).values(), (std::vector<Int>{1, 2, 3, 4, 5, 8, 9}));
  EXPECT_EQ(prime_power_products(20, 6, false).values(),
            (std::vector<Int>{2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 16, 18}));
  // The prime bound is strict.
  EXPECT_EQ(prime_powers(10, 5, false).values(), (std::vector<Int>{2, 3, 4, 8, 9}));
}

TEST(SmoothSets, AgreeWithBruteForce) {
  const std::uint64_t m = 20000, n = 24;
  std::vector<Int> smooth, pp, pp2;
  for (std::uint64_t v = 1; v < m; ++v) {
    if (!oracle::smooth_by_trial_division(v, n)) continue;
    smooth.push_back(Int(static_cast<unsigned long>(v)));
    std::size_t distinct = 0;
    for (std::uint64_t w = v, d = 2; w > 1; ++d) {
      if (w % d) continue;
      ++distinct;
      while (w % d == 0) w /= d;
    }
    if (distinct == 1) pp.push_back(Int(static_cast<unsigned long>(v)));
    if (distinct >= 1 && distinct <= 2) pp2.push_back(Int(static_cast<unsigned long>(v)));
  }
  EXPECT_EQ(smooth_numbers(m, n).values(), smooth);
  EXPECT_EQ(prime_powers(m, n, false).values(), pp);
  EXPECT_EQ(prime_power_products(m, n, false).values(), pp2);
  for (const auto& f : smooth_numbers(m, n).members) EXPECT_EQ(f, factorize(f.value()));
}

TEST(SmoothSets, BoundsChecked) {
  EXPECT_THROW(smooth_numbers(Int("1000000000000"), 1000, 1000), BoundsTooLarge);
  EXPECT_THROW(prime_powers(1, 10, false), std::invalid_argument);
  EXPECT_THROW(prime_powers(10, 1, false), std::invalid_argument);
  EXPECT_NO_THROW(prime_powers(Int("10000000"), 24, true, 200));
}

}  // namespace
}  // namespace abclll

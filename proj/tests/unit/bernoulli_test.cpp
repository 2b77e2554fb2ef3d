#include <gtest/gtest.h>

#include <cmath>

#include "moser/bernoulli.hpp"
#include "moser/cache.hpp"
#include "moser/primes.hpp"

namespace moser {
namespace {

// Akiyama-Tanigawa: an independent route to B_n (gives B_1 = +1/2).
std::vector<mpq_class> akiyama_tanigawa(unsigned n_max) {
  std::vector<mpq_class> out, a(n_max + 1);
  for (unsigned m = 0; m <= n_max; ++m) {
    a[m] = mpq_class(1, m + 1);
    for (unsigned j = m; j >= 1; --j) {
      a[j - 1] = j * (a[j - 1] - a[j]);
      a[j - 1].canonicalize();
    }
    out.push_back(a[0]);
  }
  out[1] = -out[1];
  return out;
}

TEST(Bernoulli, FrozenValues) {
  const std::vector<std::pair<Index, const char*>> known = {
      {0, "1"},         {1, "-1/2"},       {2, "1/6"},          {3, "0"},
      {4, "-1/30"},     {6, "1/42"},       {8, "-1/30"},        {10, "5/66"},
      {12, "-691/2730"}, {14, "7/6"},      {16, "-3617/510"},   {18, "43867/798"},
      {20, "-174611/330"}, {22, "854513/138"}, {24, "-236364091/2730"},
  };
  for (const auto& [k, text] : known) EXPECT_EQ(bernoulli(k).to_string(), text) << k;
}

TEST(Bernoulli, AgreesWithIndependentRecurrence) {
  auto oracle = akiyama_tanigawa(120);
  BernoulliTable table;
  table.extend_to(120);
  for (Index k = 0; k <= 120; ++k) {
    EXPECT_EQ(table.at(k).raw(), oracle[k]) << k;
  }
}

TEST(Bernoulli, TableAccess) {
  BernoulliTable table;
  EXPECT_EQ(table.max_index(), 0u);
  EXPECT_THROW((void)table.at(5), std::out_of_range);
  EXPECT_EQ(table(6).to_string(), "1/42");
  EXPECT_TRUE(table.has(6));
  auto rec = table.record(6);
  EXPECT_EQ(rec.n_k, 1);
  EXPECT_EQ(rec.d_k, 42);
  EXPECT_THROW((void)table.record(5), std::invalid_argument);
}

TEST(Bernoulli, VonStaudtClausen) {
  EXPECT_EQ(vsc_denominator(2), 6);
  EXPECT_EQ(vsc_denominator(12), 2730);
  EXPECT_EQ(vsc_denominator(36), 1919190);
  EXPECT_EQ(vsc_denominator(48), 46410);
  EXPECT_THROW(vsc_denominator(0), std::invalid_argument);
  EXPECT_THROW(vsc_denominator(7), std::invalid_argument);
  for (Index k = 2; k <= 150; k += 2) {
    EXPECT_EQ(denominator(k), vsc_denominator(k)) << k;
    EXPECT_TRUE(is_square_free_small(denominator(k))) << k;
  }
  EXPECT_THROW(numerator(3), std::invalid_argument);
  EXPECT_THROW(denominator(0), std::invalid_argument);
}

TEST(Bernoulli, SignPatternAndOddZeros) {
  for (Index k = 3; k <= 99; k += 2) EXPECT_TRUE(bernoulli(k).is_zero()) << k;
  for (Index k = 2; k <= 100; k += 2) {
    int expected = (k / 2) % 2 == 1 ? 1 : -1;
    EXPECT_EQ(bernoulli(k).sign(), expected) << k;
  }
}

TEST(Bernoulli, PrimeNumerators) {
  std::vector<Index> flagged;
  for (Index k = 2; k <= 48; k += 2) {
    if (numerator_is_prime(k)) flagged.push_back(k);
  }
  EXPECT_EQ(flagged, (std::vector<Index>{10, 12, 14, 16, 18, 36, 42}));
}

TEST(Bernoulli, SquareFreeStatus) {
  EXPECT_EQ(square_free_status(2, 100), SquareFreeStatus(TrivialNumerator{}));
  EXPECT_EQ(square_free_status(12, 100), SquareFreeStatus(NoSquareFactorBelow{100}));
  EXPECT_EQ(square_free_status(50, 10), SquareFreeStatus(HasSquareFactor{5}));
  EXPECT_EQ(square_free_status(50, 3), SquareFreeStatus(NoSquareFactorBelow{3}));
  EXPECT_EQ(square_free_status(Integer(-4 * 691), 10), SquareFreeStatus(HasSquareFactor{2}));
  Integer n50 = numerator(50);
  EXPECT_TRUE(mpz_divisible_ui_p(n50.get_mpz_t(), 25));
  EXPECT_EQ(square_free_status_escalating(n50, 100000), SquareFreeStatus(HasSquareFactor{5}));
  EXPECT_EQ(describe(SquareFreeStatus(HasSquareFactor{5})), "square-factor 5");
  EXPECT_EQ(describe(SquareFreeStatus(NoSquareFactorBelow{10000})), "no-square-factor-below 10000");
  EXPECT_EQ(describe(SquareFreeStatus(TrivialNumerator{})), "trivial");
}

TEST(Bernoulli, SizeEstimate) {
  for (Index k = 10; k <= 200; k += 2) {
    double exact = log_abs(bernoulli(k));
    EXPECT_NEAR(size_estimate(k), exact, 1e-9 * std::abs(exact)) << k;
  }
  // Truncation matters for small k.
  EXPECT_GT(std::abs(size_estimate(2, 8) - log_abs(bernoulli(2))), 1e-3);
}

TEST(Bernoulli, NumeratorBound) {
  for (Index k = 4; k <= 200; k += 2) {
    auto r = numerator_bound(k);
    EXPECT_TRUE(r.bound_holds) << k;
    EXPECT_TRUE(r.denominator_divides) << k;
    EXPECT_TRUE(numerator_bound_check(k));
  }
  EXPECT_THROW(numerator_bound(2), std::invalid_argument);
  EXPECT_THROW(numerator_bound(5), std::invalid_argument);
}

TEST(Bernoulli, SeedFromCache) {
  BernoulliTable full;
  full.extend_to(30);
  CacheStore cache;
  full.export_to(cache);
  BernoulliTable seeded;
  EXPECT_EQ(seeded.seed_from(cache), 30u);
  for (Index k = 0; k <= 30; ++k) EXPECT_EQ(seeded.at(k), full.at(k));

  // A record whose denominator disagrees with von Staudt-Clausen stops adoption.
  CacheStore bad;
  full.export_to(bad);
  bad.put(20, 1, 7);
  BernoulliTable partial;
  EXPECT_EQ(partial.seed_from(bad), 18u);
  partial.extend_to(30);
  EXPECT_EQ(partial.at(20), full.at(20));
}

}  // namespace
}  // namespace moser

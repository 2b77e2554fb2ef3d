#pragma once

// Bernoulli numbers B_k = N_k / D_k (B_1 = -1/2 convention) and the
// structural facts about them that the gcd machinery relies on.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "moser/rational.hpp"

namespace moser {

class CacheStore;

using Index = unsigned;

struct BernoulliRecord {
  Index k = 0;
  Rational value;
  Integer n_k;  // signed numerator
  Integer d_k;  // positive denominator
};

/// Memoized table of B_0..B_K computed from
///   sum_{j=0}^{n} C(n+1, j) B_j = 0.
/// Extending is not thread-safe; a fully extended table is read-only and
/// may be shared freely between threads.
class BernoulliTable {
 public:
  BernoulliTable();

  /// Ensures B_0..B_k are available.
  void extend_to(Index k);

  /// Adopts the contiguous prefix of cached records that agrees with the
  /// von Staudt-Clausen denominators. Returns the highest index adopted.
  Index seed_from(const CacheStore& cache);

  /// Writes every nonzero B_k currently held into `cache`.
  void export_to(CacheStore& cache) const;

  [[nodiscard]] Index max_index() const { return static_cast<Index>(values_.size() - 1); }
  [[nodiscard]] bool has(Index k) const { return k < values_.size(); }

  /// Requires has(k); throws std::out_of_range otherwise.
  [[nodiscard]] const Rational& at(Index k) const;
  /// Extends as needed.
  const Rational& operator()(Index k);

  /// Requires has(k) and B_k != 0.
  [[nodiscard]] BernoulliRecord record(Index k) const;

 private:
  std::vector<Rational> values_;
};

/// Exact B_k from a process-wide memoized table (mutex-guarded).
Rational bernoulli(Index k);

/// Product of primes p with (p - 1) | k. Throws std::invalid_argument for
/// odd or zero k.
Integer vsc_denominator(Index k);

/// N_k and D_k; both throw std::invalid_argument unless k is even and >= 2.
Integer numerator(Index k);
Integer denominator(Index k);

/// Primality of |N_k|: deterministic below ~3.3e24, probable-prime above.
bool numerator_is_prime(Index k);

struct NoSquareFactorBelow {
  Integer bound;
  friend bool operator==(const NoSquareFactorBelow&, const NoSquareFactorBelow&) = default;
};
struct HasSquareFactor {
  Integer p;
  friend bool operator==(const HasSquareFactor&, const HasSquareFactor&) = default;
};
struct TrivialNumerator {
  friend bool operator==(const TrivialNumerator&, const TrivialNumerator&) = default;
};
using SquareFreeStatus = std::variant<NoSquareFactorBelow, HasSquareFactor, TrivialNumerator>;

/// Tests p^2 | N_k for each prime p <= trial_bound, smallest first.
SquareFreeStatus square_free_status(const Integer& n_k, std::uint64_t trial_bound);
SquareFreeStatus square_free_status(Index k, std::uint64_t trial_bound);

/// Retries with trial bounds 10^2, 10^3, ... up to max_bound until a square
/// factor is found; the last status is returned either way.
SquareFreeStatus square_free_status_escalating(const Integer& n_k, std::uint64_t max_bound);

std::string describe(const SquareFreeStatus& status);

/// log|B_k| from |B_k| = 2 zeta(k) k! / (2 pi)^k with zeta(k) truncated to
/// `zeta_terms` terms. The truncation error in log zeta(k) is below
/// (zeta_terms)^(1-k) / (k - 1); with 64 terms and k >= 10 the result is
/// within a few ulps of the exact logarithm.
double size_estimate(Index k, unsigned zeta_terms = 64);

struct NumeratorBound {
  Index k = 0;
  double log_numerator = 0.0;   // log|N_k|
  double log_bound = 0.0;       // log(2 pi / 3) + (k - 1) log(k / pi)
  bool bound_holds = false;     // log_numerator < log_bound with margin
  bool denominator_divides = false;  // D_k | 2 (2^k - 1)
};

/// Requires k even and >= 4.
NumeratorBound numerator_bound(Index k);
inline bool numerator_bound_check(Index k) {
  auto r = numerator_bound(k);
  return r.bound_holds && r.denominator_divides;
}

}  // namespace moser

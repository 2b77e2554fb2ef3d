#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "moser/rational.hpp"

namespace moser {

/// All primes <= limit, ascending (sieve of Eratosthenes).
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

enum class Primality {
  kComposite,
  kProbablePrime,  // passed every round but is above the deterministic range
  kPrime,
};

/// Largest n for which strong-probable-prime tests to the first 13 prime
/// bases (2..41) are known to be a proof of primality.
Integer deterministic_prime_limit();

/// Strong probable-prime rounds over the bases 2..41 plus random rounds.
/// Below deterministic_prime_limit() a pass is a proof and kPrime is
/// returned; above it, kProbablePrime. Sign is ignored; |n| < 2 is
/// composite.
Primality classify_prime(const Integer& n, int extra_rounds = 24);

inline bool is_prime(const Integer& n) { return classify_prime(n) != Primality::kComposite; }

struct Factorization {
  std::vector<std::pair<Integer, unsigned>> factors;  // ascending primes
  Integer cofactor = 1;                               // 1 when complete
  [[nodiscard]] bool complete() const { return cofactor == 1; }
};

/// Trial division of |n| by primes <= bound. `cofactor` holds whatever is
/// left (possibly composite) when the bound runs out; it is 1 or a
/// certified prime when cofactor < bound^2.
Factorization factor_by_trial(const Integer& n, std::uint64_t bound);

/// Full factorization of a machine-size value.
Factorization factor_small(std::uint64_t n);

/// No prime square divides n (n >= 1); by full trial division, for small n.
bool is_square_free_small(const Integer& n);

}  // namespace moser

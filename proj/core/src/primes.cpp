#include "moser/primes.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace moser {

namespace {

constexpr std::array<unsigned long, 13> kWitnessBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

// One strong-probable-prime round for odd n > 2 with n - 1 = d * 2^s.
bool strong_probable_prime(const Integer& n, const Integer& d, unsigned long s, const Integer& base) {
  Integer n_minus_1 = n - 1;
  Integer x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

Integer deterministic_prime_limit() { return Integer("3317044064679887385961981", 10); }

Primality classify_prime(const Integer& value, int extra_rounds) {
  Integer n = ::abs(value);
  if (n < 2) return Primality::kComposite;
  for (unsigned long p : kWitnessBases) {
    if (n == p) return Primality::kPrime;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) return Primality::kComposite;
  }
  Integer d = n - 1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  for (unsigned long b : kWitnessBases) {
    if (!strong_probable_prime(n, d, s, Integer(b))) return Primality::kComposite;
  }
  if (n < deterministic_prime_limit()) return Primality::kPrime;
  // Seeded so the verdict is reproducible run to run.
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(0x6d6f736572UL);
  Integer span = n - 3;
  for (int i = 0; i < extra_rounds; ++i) {
    Integer base = rng.get_z_range(span) + 2;
    if (!strong_probable_prime(n, d, s, base)) return Primality::kComposite;
  }
  return Primality::kProbablePrime;
}

Factorization factor_by_trial(const Integer& value, std::uint64_t bound) {
  Factorization out;
  Integer n = ::abs(value);
  if (n == 0) throw std::invalid_argument("factor_by_trial: zero");
  for (std::uint64_t p : primes_up_to(bound)) {
    if (n == 1) break;
    Integer pz(static_cast<unsigned long>(p));
    if (pz * pz > n) {
      out.factors.emplace_back(n, 1);
      n = 1;
      break;
    }
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    if (e > 0) out.factors.emplace_back(pz, e);
  }
  out.cofactor = n;
  return out;
}

Factorization factor_small(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factor_small: zero");
  Factorization out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.factors.emplace_back(Integer(static_cast<unsigned long>(p)), e);
  }
  if (n > 1) out.factors.emplace_back(Integer(static_cast<unsigned long>(n)), 1);
  return out;
}

bool is_square_free_small(const Integer& n) {
  if (n < 1) throw std::invalid_argument("is_square_free_small: n must be >= 1");
  if (!n.fits_ulong_p()) throw std::out_of_range("is_square_free_small: value too large");
  for (const auto& [p, e] : factor_small(n.get_ui()).factors) {
    if (e > 1) return false;
  }
  return true;
}

}  // namespace moser

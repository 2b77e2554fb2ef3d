#include "moser/powersum.hpp"

#include <mutex>
#include <stdexcept>

namespace moser {

namespace {

FaulhaberPolynomial polynomial_for(Index k) {
  static std::mutex mutex;
  static BernoulliTable table;
  std::lock_guard lock(mutex);
  table.extend_to(k);
  return FaulhaberPolynomial(k, table);
}

void require_k(Index k, const char* what) {
  if (k < 1) throw std::invalid_argument(std::string(what) + ": k must be >= 1");
}

}  // namespace

FaulhaberPolynomial::FaulhaberPolynomial(Index k, const BernoulliTable& table) : k_(k) {
  require_k(k, "FaulhaberPolynomial");
  if (!table.has(k)) throw std::out_of_range("FaulhaberPolynomial: table does not reach B_k");
  std::vector<Rational> exact(k + 2);
  Integer binom = 1;  // C(k, nu)
  for (Index nu = 0; nu <= k; ++nu) {
    const Rational& b = table.at(k - nu);
    if (!b.is_zero()) exact[nu + 1] = Rational(binom) * b / Rational(static_cast<long>(nu + 1));
    binom *= (k - nu);
    mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), nu + 1);
  }
  denominator_ = 1;
  for (const auto& c : exact) mpz_lcm(denominator_.get_mpz_t(), denominator_.get_mpz_t(), c.den().get_mpz_t());
  coefficients_.reserve(exact.size());
  for (const auto& c : exact) coefficients_.push_back(c.num() * (denominator_ / c.den()));
}

Integer FaulhaberPolynomial::operator()(const Integer& m) const {
  Integer acc = coefficients_.back();
  for (std::size_t i = coefficients_.size() - 1; i-- > 0;) {
    acc *= m;
    acc += coefficients_[i];
  }
  if (mpz_divisible_p(acc.get_mpz_t(), denominator_.get_mpz_t()) == 0) {
    throw std::logic_error("Faulhaber evaluation did not cancel to an integer at k=" + std::to_string(k_));
  }
  mpz_divexact(acc.get_mpz_t(), acc.get_mpz_t(), denominator_.get_mpz_t());
  return acc;
}

Integer power_sum(Index k, const Integer& m) {
  require_k(k, "power_sum");
  if (m < 1) throw std::invalid_argument("power_sum: m must be >= 1");
  return polynomial_for(k)(m);
}

Integer power_sum_naive(Index k, const Integer& m) {
  require_k(k, "power_sum_naive");
  if (m < 1) throw std::invalid_argument("power_sum_naive: m must be >= 1");
  Integer sum = 0;
  Integer term;
  for (Integer i = 1; i < m; ++i) {
    mpz_pow_ui(term.get_mpz_t(), i.get_mpz_t(), k);
    sum += term;
  }
  return sum;
}

std::optional<Integer> ratio_integral(Index k, const Integer& m) {
  if (m < 3) throw std::invalid_argument("ratio_integral: m must be >= 3");
  auto s = polynomial_for(k);
  Integer lo = s(m);
  Integer hi = s(m + 1);
  if (mpz_divisible_p(hi.get_mpz_t(), lo.get_mpz_t()) == 0) return std::nullopt;
  return Integer(hi / lo);
}

std::vector<RatioHit> search_ratio_for(Index k, const FaulhaberPolynomial& s, const Integer& m_max) {
  std::vector<RatioHit> hits;
  if (m_max < 3) return hits;
  Integer current = s(Integer(3));
  for (Integer m = 3; m <= m_max; ++m) {
    // S_k(m) / m^k increases strictly with m, so once the quotient drops
    // below 2 it stays there.
    if (ipow(m, k) < current) break;
    Integer next = s(m + 1);
    if (mpz_divisible_p(next.get_mpz_t(), current.get_mpz_t()) != 0) {
      hits.push_back({k, m, Integer(next / current)});
    }
    current = std::move(next);
  }
  return hits;
}

std::vector<RatioHit> search_ratio(Index k_max, const Integer& m_max) {
  std::vector<RatioHit> hits;
  for (Index k = 1; k <= k_max; ++k) {
    auto part = search_ratio_for(k, polynomial_for(k), m_max);
    hits.insert(hits.end(), part.begin(), part.end());
  }
  return hits;
}

Integer em_residual(Index k, const Integer& m) {
  if (m < 2) throw std::invalid_argument("em_residual: m must be >= 2");
  return power_sum(k, m) - ipow(m, k);
}

std::vector<EmSolution> em_scan_for(Index k, const FaulhaberPolynomial& s, const Integer& m_max) {
  std::vector<EmSolution> out;
  for (Integer m = 2; m <= m_max; ++m) {
    Integer residual = s(m) - ipow(m, k);
    if (residual == 0) out.push_back({k, m});
    if (residual >= 0) break;
  }
  return out;
}

std::vector<EmSolution> em_scan(Index k_max, const Integer& m_max, bool even_only) {
  std::vector<EmSolution> out;
  for (Index k = 1; k <= k_max; ++k) {
    if (even_only && k > 1 && k % 2 == 1) continue;
    auto part = em_scan_for(k, polynomial_for(k), m_max);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

Integer crossover(const FaulhaberPolynomial& s) {
  for (Integer m = 2;; ++m) {
    if (s(m) >= ipow(m, s.k())) return m;
  }
}

Integer crossover(Index k) {
  require_k(k, "crossover");
  return crossover(polynomial_for(k));
}

bool s1_s3_identity_check(const Integer& m_max) {
  auto s1 = polynomial_for(1);
  auto s3 = polynomial_for(3);
  for (Integer m = 1; m <= m_max; ++m) {
    Integer a = s1(m);
    if (a * a != s3(m)) return false;
  }
  return true;
}

}  // namespace moser

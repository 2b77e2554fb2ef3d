#include "moser/bernoulli.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "moser/cache.hpp"
#include "moser/primes.hpp"

namespace moser {

namespace {

void require_even_positive(Index k, const char* what) {
  if (k == 0 || k % 2 != 0) {
    throw std::invalid_argument(std::string(what) + ": index must be even and >= 2, got " + std::to_string(k));
  }
}

}  // namespace

BernoulliTable::BernoulliTable() { values_.emplace_back(1); }

void BernoulliTable::extend_to(Index k) {
  values_.reserve(k + 1);
  while (values_.size() <= k) {
    const auto n = static_cast<unsigned long>(values_.size());
    if (n > 1 && n % 2 == 1) {
      values_.emplace_back(0);
      continue;
    }
    // sum_{j<n} C(n+1, j) B_j, walking the binomial row incrementally.
    Rational sum;
    Integer binom = 1;  // C(n+1, 0)
    for (unsigned long j = 0; j < n; ++j) {
      if (!values_[j].is_zero()) sum += Rational(binom) * values_[j];
      binom *= (n + 1 - j);
      mpz_divexact_ui(binom.get_mpz_t(), binom.get_mpz_t(), j + 1);
    }
    values_.push_back(-sum / Rational(static_cast<long>(n + 1)));
  }
}

Index BernoulliTable::seed_from(const CacheStore& cache) {
  for (Index k = static_cast<Index>(values_.size());; ++k) {
    if (k > 1 && k % 2 == 1) {
      values_.emplace_back(0);
      continue;
    }
    const auto* entry = cache.find(k);
    if (entry == nullptr) break;
    const auto& [n, d] = *entry;
    bool ok = (k == 0 && n == 1 && d == 1) || (k == 1 && n == -1 && d == 2) ||
              (k >= 2 && d == vsc_denominator(k));
    if (!ok) break;
    values_.emplace_back(n, d);
  }
  // An odd zero is only kept when the even index after it was adopted.
  while (values_.size() > 2 && values_.back().is_zero()) values_.pop_back();
  return max_index();
}

void BernoulliTable::export_to(CacheStore& cache) const {
  for (Index k = 0; k < values_.size(); ++k) {
    if (values_[k].is_zero()) continue;
    cache.put(k, values_[k].num(), values_[k].den());
  }
}

const Rational& BernoulliTable::at(Index k) const {
  if (!has(k)) throw std::out_of_range("BernoulliTable: B_" + std::to_string(k) + " not computed");
  return values_[k];
}

const Rational& BernoulliTable::operator()(Index k) {
  extend_to(k);
  return values_[k];
}

BernoulliRecord BernoulliTable::record(Index k) const {
  const Rational& b = at(k);
  if (b.is_zero()) throw std::invalid_argument("BernoulliTable: B_" + std::to_string(k) + " is zero");
  return {k, b, b.num(), b.den()};
}

Rational bernoulli(Index k) {
  static std::mutex mutex;
  static BernoulliTable table;
  std::lock_guard lock(mutex);
  return table(k);
}

Integer vsc_denominator(Index k) {
  require_even_positive(k, "vsc_denominator");
  Integer product = 1;
  for (Index d = 1; d <= k; ++d) {
    if (k % d == 0 && is_prime(Integer(d + 1))) product *= (d + 1);
  }
  return product;
}

Integer numerator(Index k) {
  require_even_positive(k, "numerator");
  return bernoulli(k).num();
}

Integer denominator(Index k) {
  require_even_positive(k, "denominator");
  return bernoulli(k).den();
}

bool numerator_is_prime(Index k) {
  require_even_positive(k, "numerator_is_prime");
  return is_prime(numerator(k));
}

SquareFreeStatus square_free_status(const Integer& n_k, std::uint64_t trial_bound) {
  if (trial_bound < 2) throw std::invalid_argument("square_free_status: trial_bound must be >= 2");
  Integer n = ::abs(n_k);
  if (n == 1) return TrivialNumerator{};
  for (std::uint64_t p : primes_up_to(trial_bound)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) == 0) continue;
    Integer square = Integer(static_cast<unsigned long>(p)) * static_cast<unsigned long>(p);
    if (mpz_divisible_p(n.get_mpz_t(), square.get_mpz_t()) != 0) {
      return HasSquareFactor{Integer(static_cast<unsigned long>(p))};
    }
  }
  return NoSquareFactorBelow{Integer(static_cast<unsigned long>(trial_bound))};
}

SquareFreeStatus square_free_status(Index k, std::uint64_t trial_bound) {
  require_even_positive(k, "square_free_status");
  return square_free_status(numerator(k), trial_bound);
}

SquareFreeStatus square_free_status_escalating(const Integer& n_k, std::uint64_t max_bound) {
  std::uint64_t bound = std::min<std::uint64_t>(100, max_bound);
  for (;;) {
    auto status = square_free_status(n_k, bound);
    if (!std::holds_alternative<NoSquareFactorBelow>(status) || bound >= max_bound) return status;
    bound = std::min(bound * 10, max_bound);
  }
}

std::string describe(const SquareFreeStatus& status) {
  struct Visitor {
    std::string operator()(const NoSquareFactorBelow& s) const { return "no-square-factor-below " + s.bound.get_str(); }
    std::string operator()(const HasSquareFactor& s) const { return "square-factor " + s.p.get_str(); }
    std::string operator()(const TrivialNumerator&) const { return "trivial"; }
  };
  return std::visit(Visitor{}, status);
}

double size_estimate(Index k, unsigned zeta_terms) {
  require_even_positive(k, "size_estimate");
  if (zeta_terms == 0) throw std::invalid_argument("size_estimate: zeta_terms must be >= 1");
  // Smallest terms first.
  double zeta = 0.0;
  for (unsigned n = zeta_terms; n >= 1; --n) zeta += std::pow(static_cast<double>(n), -static_cast<double>(k));
  const double kd = static_cast<double>(k);
  return std::log(2.0) + std::log(zeta) + std::lgamma(kd + 1.0) - kd * std::log(2.0 * std::numbers::pi);
}

NumeratorBound numerator_bound(Index k) {
  require_even_positive(k, "numerator_bound");
  if (k < 4) throw std::invalid_argument("numerator_bound: index must be >= 4");
  NumeratorBound out;
  out.k = k;
  const Rational b = bernoulli(k);
  const double kd = static_cast<double>(k);
  out.log_numerator = log_abs(b.num());
  out.log_bound = std::log(2.0 * std::numbers::pi / 3.0) + (kd - 1.0) * std::log(kd / std::numbers::pi);
  const double margin = 1e-9 * std::max(1.0, std::fabs(out.log_bound));
  out.bound_holds = out.log_bound - out.log_numerator > margin;
  Integer target = 2 * (ipow(Integer(2), k) - 1);
  out.denominator_divides = mpz_divisible_p(target.get_mpz_t(), b.den().get_mpz_t()) != 0;
  return out;
}

}  // namespace moser

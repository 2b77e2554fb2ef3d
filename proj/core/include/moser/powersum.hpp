#pragma once

// Power sums S_k(m) = 1^k + 2^k + ... + (m-1)^k.

#include <optional>
#include <vector>

#include "moser/bernoulli.hpp"

namespace moser {

/// S_k as a polynomial in m, stored with integer coefficients over one
/// common denominator:
///   S_k(m) = (sum_{i=1}^{k+1} c_i m^i) / L,
///   c_{nu+1} / L = C(k, nu) B_{k-nu} / (nu + 1).
/// Evaluation is a Horner pass followed by a single exact division.
class FaulhaberPolynomial {
 public:
  /// Requires k >= 1; `table` must hold B_0..B_k.
  FaulhaberPolynomial(Index k, const BernoulliTable& table);

  [[nodiscard]] Index k() const { return k_; }
  [[nodiscard]] const Integer& common_denominator() const { return denominator_; }
  /// Coefficient numerators c_0..c_{k+1} (c_0 = 0).
  [[nodiscard]] const std::vector<Integer>& coefficients() const { return coefficients_; }

  /// S_k(m) for m >= 1. Throws std::logic_error if the result is not an
  /// integer, which can only mean a wrong Bernoulli value.
  [[nodiscard]] Integer operator()(const Integer& m) const;

 private:
  Index k_;
  std::vector<Integer> coefficients_;
  Integer denominator_;
};

/// S_k(m) via Faulhaber's formula (shared Bernoulli table).
Integer power_sum(Index k, const Integer& m);

/// S_k(m) by direct summation; independent of any Bernoulli value.
Integer power_sum_naive(Index k, const Integer& m);

struct RatioHit {
  Index k = 0;
  Integer m;
  Integer quotient;
  friend bool operator==(const RatioHit&, const RatioHit&) = default;
};

/// S_k(m+1) / S_k(m) when it is an integer. Requires m >= 3.
std::optional<Integer> ratio_integral(Index k, const Integer& m);

/// Every (k, m) with 1 <= k <= k_max, 3 <= m <= m_max and S_k(m) | S_k(m+1),
/// ordered by (k, m). For fixed k the scan stops once m^k < S_k(m): from
/// there on 1 < S_k(m+1)/S_k(m) < 2 and no integer quotient is possible.
std::vector<RatioHit> search_ratio(Index k_max, const Integer& m_max);
/// Same search, one k at a time (used by the parallel sweep).
std::vector<RatioHit> search_ratio_for(Index k, const FaulhaberPolynomial& s, const Integer& m_max);

/// S_k(m) - m^k. Requires m >= 2.
Integer em_residual(Index k, const Integer& m);

struct EmSolution {
  Index k = 0;
  Integer m;
  friend bool operator==(const EmSolution&, const EmSolution&) = default;
};

/// All zeros of em_residual over 1 <= k <= k_max, 2 <= m <= m_max.
/// With `even_only` the odd k >= 3 are skipped (k = 1 is always scanned).
/// For fixed k the residual is negative below the crossover and positive
/// from it on, so each k's scan ends at its crossover.
std::vector<EmSolution> em_scan(Index k_max, const Integer& m_max, bool even_only = false);
std::vector<EmSolution> em_scan_for(Index k, const FaulhaberPolynomial& s, const Integer& m_max);

/// Smallest m >= 2 with S_k(m) >= m^k. Requires k >= 1.
Integer crossover(Index k);
Integer crossover(const FaulhaberPolynomial& s);

/// S_1(m)^2 == S_3(m) for every 1 <= m <= m_max.
bool s1_s3_identity_check(const Integer& m_max);

}  // namespace moser

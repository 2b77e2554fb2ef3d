#pragma once

// The gcd structure of consecutive power sums for even k:
//
//   g_k(m) = gcd(S_k(m), S_k(m+1)) / m = gcd(S_k(m), m^k) / m
//
// and the ladder gcd(S_k(m), m^r), r = 1, 2, 3, with its closed forms
//
//   gcd(S_k(m), m)       = m / gcd(D_k, m)
//   gcd(S_k(m), m^2) / m = gcd(N_k, m)   / gcd(D_k, m)
//   gcd(S_k(m), m^3) / m = gcd(N_k, m^2) / gcd(D_k, m)
//
// Every check computes both sides independently; nothing here assumes the
// identity it is checking.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moser/bernoulli.hpp"
#include "moser/powersum.hpp"

namespace moser {

/// Everything the gcd checks need about one even index k.
class GcdContext {
 public:
  /// Requires k even, k >= 2, and table.has(k).
  GcdContext(Index k, const BernoulliTable& table);

  [[nodiscard]] Index k() const { return k_; }
  [[nodiscard]] const Rational& b() const { return b_; }
  [[nodiscard]] const Integer& n() const { return n_; }
  [[nodiscard]] const Integer& abs_n() const { return abs_n_; }
  [[nodiscard]] const Integer& d() const { return d_; }
  [[nodiscard]] const FaulhaberPolynomial& s() const { return s_; }

 private:
  Index k_;
  Rational b_;
  Integer n_, abs_n_, d_;
  FaulhaberPolynomial s_;
};

/// Context built on the process-wide Bernoulli table.
GcdContext make_context(Index k);

Integer gcd(const Integer& a, const Integer& b);

template <typename T>
struct ClosedFormCheck {
  T observed;
  T predicted;
  [[nodiscard]] bool holds() const { return observed == predicted; }
};

/// g_k(m) from the definition. Requires m >= 2.
Rational g_k(const GcdContext& ctx, const Integer& m);
Rational g_k(Index k, const Integer& m);

/// gcd(S_k(m), S_k(m+1)) == gcd(S_k(m), m^k), both evaluated directly.
bool gcd_consecutive_equals_gcd_mk(const GcdContext& ctx, const Integer& m);

/// observed gcd(S_k(m), m); predicted m / gcd(D_k, m). Requires m >= 1.
ClosedFormCheck<Integer> gcd_with_m(const GcdContext& ctx, const Integer& m);
/// observed gcd(S_k(m), m^2) / m; predicted gcd(N_k, m) / gcd(D_k, m).
ClosedFormCheck<Rational> gcd_with_m2(const GcdContext& ctx, const Integer& m);
/// observed gcd(S_k(m), m^3) / m; predicted gcd(N_k, m^2) / gcd(D_k, m).
ClosedFormCheck<Rational> gcd_with_m3(const GcdContext& ctx, const Integer& m);

struct ResidualFactor {
  Rational e;                     // gcd(S, m^k) / gcd(S, m^3)
  bool integral = false;
  bool primes_divide_numerator = false;  // every prime of e divides N_k
  [[nodiscard]] bool holds() const { return integral && primes_divide_numerator; }
};

/// Requires m >= 2.
ResidualFactor gcd_with_mk_residual_factor(const GcdContext& ctx, const Integer& m);

struct GcdLadder {
  static constexpr std::array<const char*, 5> kColumns = {"m", "m^2", "m^3", "m^4", "m^k"};

  Index k = 0;
  Integer m;
  Integer s;                          // S_k(m)
  std::array<Integer, 5> observed;    // gcd(S_k(m), m^r) for r = 1, 2, 3, 4, k
  Integer predicted_m;                // m / gcd(D_k, m)
  Integer predicted_m2;               // m gcd(N_k, m) / gcd(D_k, m)
  Integer predicted_m3;               // m gcd(N_k, m^2) / gcd(D_k, m)

  /// Each observed entry divides the next.
  [[nodiscard]] bool monotone() const;
  [[nodiscard]] bool matches_closed_forms() const {
    return observed[0] == predicted_m && observed[1] == predicted_m2 && observed[2] == predicted_m3;
  }
};

/// Requires m >= 1.
GcdLadder gcd_ladder(const GcdContext& ctx, const Integer& m);

struct CongruenceVerdict {
  Index k = 0;
  Integer m;
  unsigned level = 1;       // modulus m^level
  bool applicable = false;  // precondition checked, not assumed
  bool holds = false;       // meaningful when applicable
  std::string precondition;
};

/// S_k(m) == B_k m (mod m^level) in the p-adic sense, gated on
///   level 1: k >= 2
///   level 2: k >= 4 and gcd(D_k, m) = 1
///   level 3: k >= 6 and m | B_k
/// The congruence is evaluated for every level, applicable or not.
CongruenceVerdict congruence_check(const GcdContext& ctx, const Integer& m, unsigned level);

struct LocalCongruenceVerdict {
  Index k = 0;
  Integer m;
  Integer p;
  unsigned long exponent = 0;  // p^exponent || m
  unsigned multiplier = 2;     // modulus p^(multiplier * exponent)
  bool applicable = false;
  bool holds = false;
};

/// Prime-local refinements for each p^e || m:
///   mod p^(2e) if k >= 4 and p does not divide D_k
///   mod p^(3e) if k >= 6 and p | B_k
std::vector<LocalCongruenceVerdict> local_congruence_checks(const GcdContext& ctx, const Integer& m);

struct DivisibilityEquivalence {
  bool power_sum_side = false;  // m^(r+1) | S_k(m)
  bool bernoulli_side = false;  // m^r | B_k, p-adically
  [[nodiscard]] bool holds() const { return power_sum_side == bernoulli_side; }
};

/// r in {1, 2}; m >= 1.
DivisibilityEquivalence m2_div_bk_equivalence(const GcdContext& ctx, const Integer& m, unsigned r);

struct TrivialIff {
  bool g_is_one = false;
  bool coprime = false;  // gcd(D_k N_k, m) = 1
  [[nodiscard]] bool holds() const { return g_is_one == coprime; }
};

TrivialIff gk_trivial_iff(const GcdContext& ctx, const Integer& m);

class WindowTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MinMaxScan {
  Index k = 0;
  Integer window;             // every 2 <= m <= window was scanned
  std::vector<Integer> extra_points;  // witnesses evaluated beyond the window
  Rational min, max;
  Integer argmin, argmax;     // smallest m attaining each extremum
  bool covers_witnesses = false;  // window >= max(D_k, |N_k|)
  // m where g_k(m) != gcd(N_k, m) / gcd(D_k, m) (the square-free formula).
  std::size_t closed_form_mismatches = 0;
  std::optional<Integer> first_mismatch;
};

/// Exhaustive scan of 2 <= m <= m_max; throws WindowTooSmall unless
/// m_max >= max(D_k, |N_k|).
MinMaxScan min_max_scan(const GcdContext& ctx, const Integer& m_max);

/// Scans 2 <= m <= m_max and additionally evaluates the witnesses D_k and
/// |N_k| when they lie outside the window.
MinMaxScan min_max_windowed(const GcdContext& ctx, const Integer& m_max);

struct ExtremaVerdict {
  Index k = 0;
  bool min_is_inverse_denominator = false;  // min == 1 / D_k
  bool max_at_least_numerator = false;      // max >= |N_k|
  bool square_free_certified = false;       // status is trivial or no square below bound
  bool max_equals_numerator = false;        // max == |N_k|
  bool product_equals_bernoulli = false;    // min * max == |B_k|
  bool closed_form_consistent = false;      // no closed-form mismatch in the scan
  /// Asserted parts: the unconditional extrema, and when the numerator is
  /// certified square-free, the equality branch and the product identity.
  [[nodiscard]] bool holds() const {
    bool base = min_is_inverse_denominator && max_at_least_numerator;
    if (!square_free_certified) return base;
    return base && max_equals_numerator && product_equals_bernoulli && closed_form_consistent;
  }
};

ExtremaVerdict extrema_verdict(const GcdContext& ctx, const MinMaxScan& scan, const SquareFreeStatus& status);

struct SpecialValues {
  Rational at_denominator;  // g_k(D_k)
  Rational at_numerator;    // g_k(|N_k|), only when |N_k| >= 2
  bool denominator_ok = false;
  bool numerator_ok = false;  // true when |N_k| < 2 (no witness in m >= 2)
  [[nodiscard]] bool holds() const { return denominator_ok && numerator_ok; }
};

/// g_k(D_k) == 1/D_k and g_k(|N_k|) == |N_k|.
SpecialValues special_values(const GcdContext& ctx);

struct CommonPrimeReport {
  Integer p;
  bool divides_d_s = false;
  bool divides_numerator_of_bk_over_k = false;  // numerator of B_k/k in lowest terms
  long ord_bk_over_k = 0;                       // ord_p(B_k/k)
};

struct CommonFactorVerdict {
  Index k = 0, s = 0;
  Integer c;  // gcd(N_k, D_{k-s})
  bool divides_k = false;
  bool square_free = false;
  std::vector<CommonPrimeReport> primes;
  /// "p does not divide B_k/k" read as: p does not divide the lowest-terms numerator.
  [[nodiscard]] bool holds_numerator_reading() const;
  /// ... read as: ord_p(B_k/k) <= 0.
  [[nodiscard]] bool holds_padic_reading() const;
  [[nodiscard]] bool holds() const { return holds_numerator_reading(); }
};

inline constexpr std::array<Index, 6> kCommonFactorShifts = {2, 4, 6, 8, 10, 14};

/// gcd(N_k, D_{k-s}) for s in kCommonFactorShifts, k - s >= 2, both even.
/// The table must reach B_k.
CommonFactorVerdict common_factor_check(const BernoulliTable& table, Index k, Index s);

struct M4Row {
  Integer m;
  Rational m4_ratio;        // gcd(S_k(m), m^4) / m, no closed form known
  Rational m3_ratio;        // gcd(S_k(m), m^3) / m
  Rational m3_predicted;    // gcd(N_k, m^2) / gcd(D_k, m)
  bool ladder_monotone = false;
};

std::vector<M4Row> m4_explore(const GcdContext& ctx, const Integer& m_lo, const Integer& m_hi);

}  // namespace moser

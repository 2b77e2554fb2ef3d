#pragma once

// Exact integers and fractions used throughout the library.
//
// Integer is GMP's mpz_class. Rational wraps mpq_class and keeps it
// canonical at all times: lowest terms, positive denominator, zero as 0/1.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>

namespace moser {

using Integer = mpz_class;

/// Sentinel order for zero: ord_p(0) = +infinity.
inline constexpr long kInfiniteOrder = std::numeric_limits<long>::max();

class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(const Integer& value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  /// Throws std::domain_error when `den` is zero.
  Rational(const Integer& num, const Integer& den);

  /// Parses "N", "-N", "N/D" or "-N/D"; throws std::invalid_argument.
  static Rational parse(std::string_view text);

  [[nodiscard]] Integer num() const { return Integer(value_.get_num()); }
  [[nodiscard]] Integer den() const { return Integer(value_.get_den()); }
  [[nodiscard]] const mpq_class& raw() const { return value_; }

  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
  [[nodiscard]] Rational abs() const;

  /// `N/D` with the sign on the numerator; integers print without `/1`.
  [[nodiscard]] std::string to_string() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  /// Throws std::domain_error on division by zero.
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
  friend Rational operator-(const Rational& x);

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return lhs.value_ == rhs.value_;
  }
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs);

  friend std::ostream& operator<<(std::ostream& os, const Rational& x);

 private:
  mpq_class value_{0};
};

/// Decimal rendering of an Integer.
std::string to_string(const Integer& value);

/// Parses a signed decimal integer; throws std::invalid_argument.
Integer parse_integer(std::string_view text);

/// base^exp for non-negative exp.
Integer ipow(const Integer& base, unsigned long exp);

/// Exponent of the prime `p` in `n`; kInfiniteOrder when n == 0.
long ord_p(const Integer& n, const Integer& p);

/// p-adic order of a rational: ord_p(num) - ord_p(den).
long ord_p(const Rational& x, const Integer& p);

/// m^r | b in the p-adic sense: ord_p(b) >= r * ord_p(m) for every prime
/// p | m. For b = N/D in lowest terms this is gcd(m, D) = 1 and m^r | N.
bool divides_rational(const Integer& m, unsigned long r, const Rational& b);

/// Natural log of |x| for x != 0, accurate to double precision even when
/// x lies far outside the double range.
double log_abs(const Integer& x);
double log_abs(const Rational& x);

}  // namespace moser

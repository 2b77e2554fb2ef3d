#include "moser/rational.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace moser {

Rational::Rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  auto den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text.front() == '-' || den_text.front() == '+'))
    throw std::invalid_argument("Rational: sign belongs on the numerator");
  return Rational(parse_integer(text.substr(0, slash)), parse_integer(den_text));
}

Rational Rational::abs() const {
  Rational out;
  out.value_ = ::abs(value_);
  return out;
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("Rational: division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational operator-(const Rational& x) {
  Rational out;
  out.value_ = -x.value_;
  return out;
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
  int c = cmp(lhs.value_, rhs.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.to_string(); }

std::string to_string(const Integer& value) { return value.get_str(); }

Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  std::size_t digits_from = (!s.empty() && s.front() == '-') ? 1 : 0;
  if (s.size() == digits_from) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  for (std::size_t i = digits_from; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return Integer(s, 10);
}

Integer ipow(const Integer& base, unsigned long exp) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

long ord_p(const Integer& n, const Integer& p) {
  if (p < 2) throw std::invalid_argument("ord_p: p must be >= 2");
  if (n == 0) return kInfiniteOrder;
  Integer rest;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

long ord_p(const Rational& x, const Integer& p) {
  if (x.is_zero()) return kInfiniteOrder;
  return ord_p(x.num(), p) - ord_p(x.den(), p);
}

bool divides_rational(const Integer& m, unsigned long r, const Rational& b) {
  if (m < 1) throw std::invalid_argument("divides_rational: m must be >= 1");
  if (m == 1 || b.is_zero()) return true;
  Integer g;
  mpz_gcd(g.get_mpz_t(), m.get_mpz_t(), b.den().get_mpz_t());
  if (g != 1) return false;
  Integer mr = ipow(m, r);
  return mpz_divisible_p(b.num().get_mpz_t(), mr.get_mpz_t()) != 0;
}

double log_abs(const Integer& x) {
  if (x == 0) throw std::domain_error("log_abs: zero");
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double log_abs(const Rational& x) { return log_abs(x.num()) - log_abs(x.den()); }

}  // namespace moser

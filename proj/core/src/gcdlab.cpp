#include "moser/gcdlab.hpp"

#include <algorithm>
#include <mutex>

#include "moser/primes.hpp"

namespace moser {

namespace {

void require_m(const Integer& m, long minimum, const char* what) {
  if (m < minimum) throw std::invalid_argument(std::string(what) + ": m must be >= " + std::to_string(minimum));
}

Integer gcd_with_power(const Integer& s, const Integer& m, unsigned long r) { return gcd(s, ipow(m, r)); }

// Prime factorization of m for the local congruence checks.
Factorization factor_m(const Integer& m) {
  if (m.fits_ulong_p()) return factor_small(m.get_ui());
  constexpr std::uint64_t kBound = 1'000'000;
  Factorization f = factor_by_trial(m, kBound);
  if (f.cofactor != 1) {
    if (f.cofactor >= Integer(static_cast<unsigned long>(kBound)) * static_cast<unsigned long>(kBound) &&
        !is_prime(f.cofactor)) {
      throw std::invalid_argument("local congruence: cannot factor m = " + m.get_str());
    }
    f.factors.emplace_back(f.cofactor, 1);
    f.cofactor = 1;
  }
  return f;
}

// True when every prime dividing e also divides n (n != 0).
bool radical_divides(Integer e, const Integer& n) {
  e = ::abs(e);
  for (;;) {
    Integer g = gcd(e, n);
    if (g == 1) break;
    while (mpz_divisible_p(e.get_mpz_t(), g.get_mpz_t()) != 0) mpz_divexact(e.get_mpz_t(), e.get_mpz_t(), g.get_mpz_t());
  }
  return e == 1;
}

}  // namespace

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

GcdContext::GcdContext(Index k, const BernoulliTable& table)
    : k_(k), b_(table.at(k)), n_(b_.num()), abs_n_(::abs(n_)), d_(b_.den()), s_(k, table) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("GcdContext: k must be even and >= 2");
}

GcdContext make_context(Index k) {
  static std::mutex mutex;
  static BernoulliTable table;
  std::lock_guard lock(mutex);
  table.extend_to(k);
  return GcdContext(k, table);
}

Rational g_k(const GcdContext& ctx, const Integer& m) {
  require_m(m, 2, "g_k");
  return Rational(gcd(ctx.s()(m), ctx.s()(m + 1)), m);
}

Rational g_k(Index k, const Integer& m) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("g_k: k must be even and >= 2");
  return g_k(make_context(k), m);
}

bool gcd_consecutive_equals_gcd_mk(const GcdContext& ctx, const Integer& m) {
  require_m(m, 2, "gcd_consecutive_equals_gcd_mk");
  Integer s = ctx.s()(m);
  return gcd(s, ctx.s()(m + 1)) == gcd_with_power(s, m, ctx.k());
}

ClosedFormCheck<Integer> gcd_with_m(const GcdContext& ctx, const Integer& m) {
  require_m(m, 1, "gcd_with_m");
  return {gcd(ctx.s()(m), m), m / gcd(ctx.d(), m)};
}

ClosedFormCheck<Rational> gcd_with_m2(const GcdContext& ctx, const Integer& m) {
  require_m(m, 1, "gcd_with_m2");
  return {Rational(gcd_with_power(ctx.s()(m), m, 2), m), Rational(gcd(ctx.n(), m), gcd(ctx.d(), m))};
}

ClosedFormCheck<Rational> gcd_with_m3(const GcdContext& ctx, const Integer& m) {
  require_m(m, 1, "gcd_with_m3");
  return {Rational(gcd_with_power(ctx.s()(m), m, 3), m), Rational(gcd(ctx.n(), m * m), gcd(ctx.d(), m))};
}

ResidualFactor gcd_with_mk_residual_factor(const GcdContext& ctx, const Integer& m) {
  require_m(m, 2, "gcd_with_mk_residual_factor");
  Integer s = ctx.s()(m);
  ResidualFactor out;
  out.e = Rational(gcd_with_power(s, m, ctx.k()), gcd_with_power(s, m, 3));
  out.integral = out.e.is_integer();
  out.primes_divide_numerator = out.integral && radical_divides(out.e.num(), ctx.n());
  return out;
}

bool GcdLadder::monotone() const {
  for (std::size_t i = 0; i + 1 < observed.size(); ++i) {
    // For k = 2 the m^k column is gcd with m^2; compare in exponent order.
    const Integer& a = observed[i];
    const Integer& b = observed[i + 1];
    bool forward = mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t()) != 0;
    bool backward = mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()) != 0;
    if (i + 1 == observed.size() - 1 && k < 4) {
      if (!backward) return false;
    } else if (!forward) {
      return false;
    }
  }
  return true;
}

GcdLadder gcd_ladder(const GcdContext& ctx, const Integer& m) {
  require_m(m, 1, "gcd_ladder");
  GcdLadder out;
  out.k = ctx.k();
  out.m = m;
  out.s = ctx.s()(m);
  const std::array<unsigned long, 5> exponents = {1, 2, 3, 4, ctx.k()};
  for (std::size_t i = 0; i < exponents.size(); ++i) out.observed[i] = gcd_with_power(out.s, m, exponents[i]);
  Integer dm = gcd(ctx.d(), m);
  out.predicted_m = m / dm;
  out.predicted_m2 = m * gcd(ctx.n(), m) / dm;
  out.predicted_m3 = m * gcd(ctx.n(), m * m) / dm;
  return out;
}

CongruenceVerdict congruence_check(const GcdContext& ctx, const Integer& m, unsigned level) {
  if (level < 1 || level > 3) throw std::invalid_argument("congruence_check: level must be 1, 2 or 3");
  require_m(m, 1, "congruence_check");
  CongruenceVerdict out;
  out.k = ctx.k();
  out.m = m;
  out.level = level;
  switch (level) {
    case 1:
      out.applicable = ctx.k() >= 2;
      out.precondition = "k >= 2";
      break;
    case 2:
      out.applicable = ctx.k() >= 4 && gcd(ctx.d(), m) == 1;
      out.precondition = "k >= 4 and gcd(D_k, m) = 1";
      break;
    default:
      out.applicable = ctx.k() >= 6 && divides_rational(m, 1, ctx.b());
      out.precondition = "k >= 6 and m | B_k";
      break;
  }
  Rational difference = Rational(ctx.s()(m)) - ctx.b() * Rational(m);
  out.holds = divides_rational(m, level, difference);
  return out;
}

std::vector<LocalCongruenceVerdict> local_congruence_checks(const GcdContext& ctx, const Integer& m) {
  require_m(m, 1, "local_congruence_checks");
  std::vector<LocalCongruenceVerdict> out;
  if (m == 1) return out;
  Rational difference = Rational(ctx.s()(m)) - ctx.b() * Rational(m);
  for (const auto& [p, e] : factor_m(m).factors) {
    long ord = ord_p(difference, p);
    for (unsigned multiplier : {2U, 3U}) {
      LocalCongruenceVerdict v;
      v.k = ctx.k();
      v.m = m;
      v.p = p;
      v.exponent = e;
      v.multiplier = multiplier;
      if (multiplier == 2) {
        v.applicable = ctx.k() >= 4 && mpz_divisible_p(ctx.d().get_mpz_t(), p.get_mpz_t()) == 0;
      } else {
        v.applicable = ctx.k() >= 6 && ord_p(ctx.b(), p) >= 1;
      }
      v.holds = ord >= static_cast<long>(multiplier * e);
      out.push_back(std::move(v));
    }
  }
  return out;
}

DivisibilityEquivalence m2_div_bk_equivalence(const GcdContext& ctx, const Integer& m, unsigned r) {
  if (r != 1 && r != 2) throw std::invalid_argument("m2_div_bk_equivalence: r must be 1 or 2");
  require_m(m, 1, "m2_div_bk_equivalence");
  DivisibilityEquivalence out;
  Integer s = ctx.s()(m);
  Integer modulus = ipow(m, r + 1);
  out.power_sum_side = mpz_divisible_p(s.get_mpz_t(), modulus.get_mpz_t()) != 0;
  out.bernoulli_side = divides_rational(m, r, ctx.b());
  return out;
}

TrivialIff gk_trivial_iff(const GcdContext& ctx, const Integer& m) {
  TrivialIff out;
  out.g_is_one = g_k(ctx, m) == Rational(1);
  out.coprime = gcd(ctx.d() * ctx.n(), m) == 1;
  return out;
}

namespace {

void record_point(MinMaxScan& scan, const GcdContext& ctx, const Integer& m, const Rational& g, bool& first) {
  if (first || g < scan.min) {
    scan.min = g;
    scan.argmin = m;
  }
  if (first || g > scan.max) {
    scan.max = g;
    scan.argmax = m;
  }
  first = false;
  Rational closed_form(gcd(ctx.n(), m), gcd(ctx.d(), m));
  if (g != closed_form) {
    if (scan.closed_form_mismatches++ == 0) scan.first_mismatch = m;
  }
}

MinMaxScan scan_window(const GcdContext& ctx, const Integer& m_max) {
  MinMaxScan scan;
  scan.k = ctx.k();
  scan.window = m_max;
  scan.covers_witnesses = m_max >= ctx.d() && m_max >= ctx.abs_n();
  bool first = true;
  Integer current = ctx.s()(Integer(2));
  for (Integer m = 2; m <= m_max; ++m) {
    Integer next = ctx.s()(m + 1);
    record_point(scan, ctx, m, Rational(gcd(current, next), m), first);
    current = std::move(next);
  }
  return scan;
}

}  // namespace

MinMaxScan min_max_scan(const GcdContext& ctx, const Integer& m_max) {
  if (m_max < ctx.d() || m_max < ctx.abs_n()) {
    throw WindowTooSmall("min_max_scan: window " + m_max.get_str() + " does not reach the witnesses D_k = " +
                         ctx.d().get_str() + ", |N_k| = " + ctx.abs_n().get_str());
  }
  return scan_window(ctx, m_max);
}

MinMaxScan min_max_windowed(const GcdContext& ctx, const Integer& m_max) {
  if (m_max < 2) throw std::invalid_argument("min_max_windowed: window must reach m = 2");
  MinMaxScan scan = scan_window(ctx, m_max);
  bool first = false;
  std::vector<Integer> witnesses = {ctx.d(), ctx.abs_n()};
  std::sort(witnesses.begin(), witnesses.end());
  for (const Integer& w : witnesses) {
    if (w <= m_max || w < 2) continue;
    if (!scan.extra_points.empty() && scan.extra_points.back() == w) continue;
    scan.extra_points.push_back(w);
    record_point(scan, ctx, w, g_k(ctx, w), first);
  }
  return scan;
}

ExtremaVerdict extrema_verdict(const GcdContext& ctx, const MinMaxScan& scan, const SquareFreeStatus& status) {
  ExtremaVerdict v;
  v.k = ctx.k();
  v.min_is_inverse_denominator = scan.min == Rational(Integer(1), ctx.d());
  v.max_at_least_numerator = scan.max >= Rational(ctx.abs_n());
  v.square_free_certified = !std::holds_alternative<HasSquareFactor>(status);
  v.max_equals_numerator = scan.max == Rational(ctx.abs_n());
  v.product_equals_bernoulli = scan.min * scan.max == ctx.b().abs();
  v.closed_form_consistent = scan.closed_form_mismatches == 0;
  return v;
}

SpecialValues special_values(const GcdContext& ctx) {
  SpecialValues out;
  out.at_denominator = g_k(ctx, ctx.d());
  out.denominator_ok = out.at_denominator == Rational(Integer(1), ctx.d());
  if (ctx.abs_n() >= 2) {
    out.at_numerator = g_k(ctx, ctx.abs_n());
    out.numerator_ok = out.at_numerator == Rational(ctx.abs_n());
  } else {
    out.numerator_ok = true;
  }
  return out;
}

bool CommonFactorVerdict::holds_numerator_reading() const {
  if (!divides_k || !square_free) return false;
  for (const auto& p : primes) {
    if (p.divides_d_s || p.divides_numerator_of_bk_over_k) return false;
  }
  return true;
}

bool CommonFactorVerdict::holds_padic_reading() const {
  if (!divides_k || !square_free) return false;
  for (const auto& p : primes) {
    if (p.divides_d_s || p.ord_bk_over_k > 0) return false;
  }
  return true;
}

CommonFactorVerdict common_factor_check(const BernoulliTable& table, Index k, Index s) {
  if (k % 2 != 0 || s % 2 != 0 || s == 0 || k < s + 2) {
    throw std::invalid_argument("common_factor_check: need even k, s with k - s >= 2");
  }
  CommonFactorVerdict out;
  out.k = k;
  out.s = s;
  const Rational& bk = table.at(k);
  const Integer d_shift = table.at(k - s).den();
  const Integer d_s = table.at(s).den();
  out.c = gcd(bk.num(), d_shift);
  out.divides_k = mpz_divisible_p(Integer(k).get_mpz_t(), out.c.get_mpz_t()) != 0;

  // C | k, so its primes are among the primes of k.
  Integer rest = out.c;
  out.square_free = true;
  for (const auto& [p, e] : factor_small(k).factors) {
    long ord = ord_p(rest, p);
    if (ord == 0) continue;
    if (ord > 1) out.square_free = false;
    for (long i = 0; i < ord; ++i) mpz_divexact(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    CommonPrimeReport report;
    report.p = p;
    report.divides_d_s = mpz_divisible_p(d_s.get_mpz_t(), p.get_mpz_t()) != 0;
    Rational bk_over_k = bk / Rational(static_cast<long>(k));
    report.divides_numerator_of_bk_over_k = mpz_divisible_p(bk_over_k.num().get_mpz_t(), p.get_mpz_t()) != 0;
    report.ord_bk_over_k = ord_p(bk_over_k, p);
    out.primes.push_back(std::move(report));
  }
  // Anything left has a prime outside k; then C does not divide k.
  if (rest != 1) out.divides_k = false;
  return out;
}

std::vector<M4Row> m4_explore(const GcdContext& ctx, const Integer& m_lo, const Integer& m_hi) {
  require_m(m_lo, 1, "m4_explore");
  std::vector<M4Row> rows;
  for (Integer m = m_lo; m <= m_hi; ++m) {
    GcdLadder ladder = gcd_ladder(ctx, m);
    M4Row row;
    row.m = m;
    row.m4_ratio = Rational(ladder.observed[3], m);
    row.m3_ratio = Rational(ladder.observed[2], m);
    row.m3_predicted = Rational(gcd(ctx.n(), m * m), gcd(ctx.d(), m));
    row.ladder_monotone = ladder.monotone();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace moser

#include "moser/sweeps.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "moser/cache.hpp"
#include "moser/gcdlab.hpp"
#include "moser/powersum.hpp"
#include "moser/primes.hpp"

namespace moser {

namespace {

constexpr std::array<std::pair<CheckGroup, std::string_view>, 11> kGroupNames = {{
    {CheckGroup::kBernoulli, "bernoulli"},
    {CheckGroup::kFaulhaber, "faulhaber"},
    {CheckGroup::kRatioSearch, "ratio-search"},
    {CheckGroup::kEmScan, "em-scan"},
    {CheckGroup::kGcdLadder, "gcd-ladder"},
    {CheckGroup::kCongruence, "congruence"},
    {CheckGroup::kExtrema, "extrema"},
    {CheckGroup::kMinMaxProduct, "min-max-product"},
    {CheckGroup::kCommonFactor, "common-factor"},
    {CheckGroup::kBounds, "bounds"},
    {CheckGroup::kNumeratorScan, "numerator-scan"},
}};

// Published index lists the numerator scan is compared against.
constexpr std::array<Index, 7> kKnownPrimeNumeratorIndices = {10, 12, 14, 16, 18, 36, 42};
constexpr Index kKnownPrimeNumeratorLimit = 48;
constexpr std::array<Index, 5> kKnownSquareFactorIndices = {50, 98, 150, 196, 228};
constexpr Index kKnownSquareFactorLimit = 228;

constexpr double kSizeEstimateTolerance = 1e-9;

template <std::size_t N>
bool contains(const std::array<Index, N>& list, Index k) {
  return std::find(list.begin(), list.end(), k) != list.end();
}

// Results of one work unit; merged in unit order.
class Partial {
 public:
  void pass(const std::string& check) { checks_[check].pass++; }
  void inapplicable(const std::string& check) { checks_[check].inapplicable++; }
  void fail(const std::string& check, Counterexample c) {
    auto& t = checks_[check];
    t.fail++;
    t.counterexamples.push_back(std::move(c));
  }
  void exception(const std::string& check, Counterexample c) {
    auto& t = checks_[check];
    t.inapplicable++;
    t.exceptions.push_back(std::move(c));
  }
  template <typename MakeCounterexample>
  void expect(const std::string& check, bool ok, MakeCounterexample&& make) {
    if (ok) {
      pass(check);
    } else {
      fail(check, make());
    }
  }
  void hit(Hit h) { hits_.push_back(std::move(h)); }

  void merge_into(SweepReport& report) && {
    for (auto& [name, tally] : checks_) {
      auto& dst = report.checks[name];
      dst.pass += tally.pass;
      dst.fail += tally.fail;
      dst.inapplicable += tally.inapplicable;
      std::move(tally.counterexamples.begin(), tally.counterexamples.end(), std::back_inserter(dst.counterexamples));
      std::move(tally.exceptions.begin(), tally.exceptions.end(), std::back_inserter(dst.exceptions));
    }
    std::move(hits_.begin(), hits_.end(), std::back_inserter(report.hits));
  }

 private:
  std::map<std::string, CheckTally> checks_;
  std::vector<Hit> hits_;
};

Counterexample cx(Index k, const Integer* m, std::string observed, std::string predicted, std::string note = {}) {
  return {k, m != nullptr ? m->get_str() : std::string(), std::move(observed), std::move(predicted), std::move(note)};
}

struct Unit {
  CheckGroup group;
  Index k;
};

class SweepRunner {
 public:
  SweepRunner(const GridSpec& spec, const BernoulliTable& table) : spec_(spec), table_(table) {}

  void run(const Unit& unit, Partial& out) const {
    switch (unit.group) {
      case CheckGroup::kBernoulli: return bernoulli(unit.k, out);
      case CheckGroup::kFaulhaber: return faulhaber(unit.k, out);
      case CheckGroup::kRatioSearch: return ratio_search(unit.k, out);
      case CheckGroup::kEmScan: return em_scan(unit.k, out);
      case CheckGroup::kGcdLadder: return gcd_ladder_cells(unit.k, out);
      case CheckGroup::kCongruence: return congruence(unit.k, out);
      case CheckGroup::kExtrema: return extrema_witnesses(unit.k, out);
      case CheckGroup::kMinMaxProduct: return min_max_product(unit.k, out);
      case CheckGroup::kCommonFactor: return common_factor(unit.k, out);
      case CheckGroup::kBounds: return bounds(unit.k, out);
      case CheckGroup::kNumeratorScan: return numerator_scan(unit.k, out);
    }
  }

 private:
  [[nodiscard]] Integer m_from(long floor) const { return std::max(spec_.m_min, Integer(floor)); }

  void bernoulli(Index k, Partial& out) const {
    const Rational& b = table_.at(k);
    if (k == 0 || k == 1) {
      Rational expected = k == 0 ? Rational(1) : Rational(Integer(-1), Integer(2));
      out.expect("bernoulli.initial-values", b == expected,
                 [&] { return cx(k, nullptr, b.to_string(), expected.to_string()); });
      return;
    }
    if (k % 2 == 1) {
      out.expect("bernoulli.odd-zero", b.is_zero(), [&] { return cx(k, nullptr, b.to_string(), "0"); });
      return;
    }
    Integer vsc = vsc_denominator(k);
    out.expect("bernoulli.vsc-denominator", b.den() == vsc,
               [&] { return cx(k, nullptr, b.den().get_str(), vsc.get_str()); });
    int expected_sign = (k / 2) % 2 == 1 ? 1 : -1;
    out.expect("bernoulli.sign", b.sign() == expected_sign,
               [&] { return cx(k, nullptr, std::to_string(b.sign()), std::to_string(expected_sign)); });
    out.expect("bernoulli.denominator-square-free", is_square_free_small(b.den()),
               [&] { return cx(k, nullptr, b.den().get_str(), "square-free"); });
    Integer target = 2 * (ipow(Integer(2), k) - 1);
    out.expect("bernoulli.denominator-divides-2(2^k-1)",
               mpz_divisible_p(target.get_mpz_t(), b.den().get_mpz_t()) != 0,
               [&] { return cx(k, nullptr, b.den().get_str(), "divisor of " + target.get_str()); });
  }

  void faulhaber(Index k, Partial& out) const {
    FaulhaberPolynomial s(k, table_);
    Integer one = 1, two = 2;
    out.expect("powersum.initial-values", s(one) == 0 && s(two) == 1,
               [&] { return cx(k, nullptr, s(one).get_str() + "," + s(two).get_str(), "0,1"); });
    // Direct summation carried along m.
    Integer naive = 0;
    Integer m = 1;
    Integer m_lo = m_from(1);
    for (; m < m_lo; ++m) naive += ipow(m, k);
    for (; m <= spec_.m_max; ++m) {
      Integer fast = s(m);
      out.expect("powersum.faulhaber-vs-naive", fast == naive,
                 [&] { return cx(k, &m, fast.get_str(), naive.get_str()); });
      Integer step = ipow(m, k);
      Integer next = s(m + 1);
      out.expect("powersum.telescoping", next - fast == step,
                 [&] { return cx(k, &m, Integer(next - fast).get_str(), step.get_str()); });
      naive += step;
    }
    if (k == 3 && table_.has(3)) {
      FaulhaberPolynomial s1(1, table_);
      for (Integer mm = m_lo; mm <= spec_.m_max; ++mm) {
        Integer a = s1(mm);
        Integer a2 = a * a;
        Integer c = s(mm);
        out.expect("powersum.s1-squared-equals-s3", a2 == c,
                   [&] { return cx(k, &mm, a2.get_str(), c.get_str()); });
      }
    }
  }

  static bool known_ratio_hit(const RatioHit& h) {
    return (h.k == 1 && h.m == 3 && h.quotient == 2) || (h.k == 3 && h.m == 3 && h.quotient == 4);
  }

  void ratio_search(Index k, Partial& out) const {
    FaulhaberPolynomial s(k, table_);
    auto hits = search_ratio_for(k, s, spec_.m_max);
    bool only_known = true;
    for (const auto& h : hits) {
      out.hit({"ratio", k, h.m.get_str(), h.quotient.get_str(), known_ratio_hit(h) ? "known" : "new"});
      if (!known_ratio_hit(h)) {
        only_known = false;
        out.fail("powersum.ratio-search", cx(k, &h.m, "S_k(m+1)/S_k(m) = " + h.quotient.get_str(), "not an integer"));
      }
    }
    if (only_known) out.pass("powersum.ratio-search");
  }

  void em_scan(Index k, Partial& out) const {
    if (spec_.even_only && k > 1 && k % 2 == 1) {
      out.inapplicable("powersum.em-scan");
      return;
    }
    FaulhaberPolynomial s(k, table_);
    auto sols = em_scan_for(k, s, spec_.m_max);
    bool only_trivial = true;
    for (const auto& sol : sols) {
      bool trivial = sol.k == 1 && sol.m == 3;
      out.hit({"em-solution", k, sol.m.get_str(), "0", trivial ? "trivial" : "new"});
      if (!trivial) {
        only_trivial = false;
        out.fail("powersum.em-scan", cx(k, &sol.m, "S_k(m) = m^k", "no solution"));
      }
    }
    if (only_trivial) out.pass("powersum.em-scan");
  }

  void gcd_ladder_cells(Index k, Partial& out) const {
    GcdContext ctx(k, table_);
    for (Integer m = m_from(1); m <= spec_.m_max; ++m) {
      auto c1 = gcd_with_m(ctx, m);
      out.expect("gcd.with-m", c1.holds(),
                 [&] { return cx(k, &m, c1.observed.get_str(), c1.predicted.get_str()); });
      auto c2 = gcd_with_m2(ctx, m);
      out.expect("gcd.with-m2", c2.holds(),
                 [&] { return cx(k, &m, c2.observed.to_string(), c2.predicted.to_string()); });
      auto c3 = gcd_with_m3(ctx, m);
      out.expect("gcd.with-m3", c3.holds(),
                 [&] { return cx(k, &m, c3.observed.to_string(), c3.predicted.to_string()); });
      auto ladder = gcd_ladder(ctx, m);
      out.expect("gcd.ladder-monotone", ladder.monotone(), [&] {
        std::string row;
        for (const auto& g : ladder.observed) row += (row.empty() ? "" : ",") + g.get_str();
        return cx(k, &m, row, "divisibility chain");
      });
      if (m < 2) continue;
      out.expect("gcd.consecutive-equals-mk", gcd_consecutive_equals_gcd_mk(ctx, m),
                 [&] { return cx(k, &m, "gcd(S(m),S(m+1)) != gcd(S(m),m^k)", "equal"); });
      auto e = gcd_with_mk_residual_factor(ctx, m);
      out.expect("gcd.mk-residual-factor", e.holds(),
                 [&] { return cx(k, &m, e.e.to_string(), "integer whose primes divide N_k"); });
      Rational g = g_k(ctx, m);
      Rational floor_value(Integer(1), gcd(ctx.d(), m));
      out.expect("gcd.gk-lower-bound", g >= floor_value && floor_value >= Rational(Integer(1), ctx.d()),
                 [&] { return cx(k, &m, g.to_string(), ">= " + floor_value.to_string()); });
      auto iff = gk_trivial_iff(ctx, m);
      out.expect("gcd.gk-trivial-iff", iff.holds(), [&] {
        return cx(k, &m, std::string("g==1: ") + (iff.g_is_one ? "true" : "false"),
                  std::string("coprime: ") + (iff.coprime ? "true" : "false"));
      });
    }
  }

  void congruence(Index k, Partial& out) const {
    GcdContext ctx(k, table_);
    static const std::array<std::string, 3> kLevelNames = {"congruence.level1", "congruence.level2",
                                                           "congruence.level3"};
    for (Integer m = m_from(1); m <= spec_.m_max; ++m) {
      for (unsigned level = 1; level <= 3; ++level) {
        auto v = congruence_check(ctx, m, level);
        const auto& name = kLevelNames[level - 1];
        if (!v.applicable) {
          out.inapplicable(name);
          continue;
        }
        out.expect(name, v.holds, [&] {
          return cx(k, &m, "S_k(m) - B_k m not divisible", "0 mod m^" + std::to_string(level), v.precondition);
        });
      }
      for (const auto& v : local_congruence_checks(ctx, m)) {
        std::string name = v.multiplier == 2 ? "congruence.local-p2r" : "congruence.local-p3r";
        if (!v.applicable) {
          out.inapplicable(name);
          continue;
        }
        out.expect(name, v.holds, [&] {
          return cx(k, &m, "p=" + v.p.get_str(),
                    "0 mod p^" + std::to_string(v.multiplier * v.exponent));
        });
      }
      for (unsigned r = 1; r <= 2; ++r) {
        auto eq = m2_div_bk_equivalence(ctx, m, r);
        out.expect("congruence.power-sum-bernoulli-equivalence-r" + std::to_string(r), eq.holds(), [&] {
          return cx(k, &m, std::string("m^(r+1)|S: ") + (eq.power_sum_side ? "true" : "false"),
                    std::string("m^r|B_k: ") + (eq.bernoulli_side ? "true" : "false"));
        });
      }
    }
  }

  void extrema_witnesses(Index k, Partial& out) const {
    GcdContext ctx(k, table_);
    auto sv = special_values(ctx);
    out.expect("extrema.g-at-denominator", sv.denominator_ok, [&] {
      return cx(k, &ctx.d(), sv.at_denominator.to_string(), Rational(Integer(1), ctx.d()).to_string());
    });
    if (ctx.abs_n() < 2) {
      out.inapplicable("extrema.g-at-numerator");
    } else {
      out.expect("extrema.g-at-numerator", sv.numerator_ok,
                 [&] { return cx(k, &ctx.abs_n(), sv.at_numerator.to_string(), ctx.abs_n().get_str()); });
    }
    out.hit({"special-values", k, "", "g(D_k)=" + sv.at_denominator.to_string() +
                                         (ctx.abs_n() >= 2 ? ", g(|N_k|)=" + sv.at_numerator.to_string() : ""),
             ""});
  }

  void min_max_product(Index k, Partial& out) const {
    GcdContext ctx(k, table_);
    auto status = square_free_status(ctx.n(), spec_.square_trial_bound);
    Integer reach = std::max(ctx.d(), ctx.abs_n());
    MinMaxScan scan = reach <= spec_.extrema_budget ? min_max_scan(ctx, reach)
                                                    : min_max_windowed(ctx, std::max(Integer(2), spec_.extrema_window));
    auto v = extrema_verdict(ctx, scan, status);
    std::string where = scan.covers_witnesses ? "full window" : "window + witnesses";
    out.expect("extrema.minimum", v.min_is_inverse_denominator, [&] {
      return cx(k, &scan.argmin, scan.min.to_string(), Rational(Integer(1), ctx.d()).to_string(), where);
    });
    out.expect("extrema.maximum-lower-bound", v.max_at_least_numerator,
               [&] { return cx(k, &scan.argmax, scan.max.to_string(), ">= " + ctx.abs_n().get_str(), where); });
    Rational product = scan.min * scan.max;
    if (v.square_free_certified) {
      out.expect("min-max-product.min-times-max", v.product_equals_bernoulli && v.max_equals_numerator, [&] {
        return cx(k, nullptr, product.to_string(), ctx.b().abs().to_string(), where);
      });
      out.expect("extrema.square-free-closed-form", v.closed_form_consistent, [&] {
        return cx(k, scan.first_mismatch ? &*scan.first_mismatch : nullptr, "g_k(m)", "gcd(N_k,m)/gcd(D_k,m)",
                  std::to_string(scan.closed_form_mismatches) + " mismatches");
      });
    } else {
      // Square factor found: only the >= branch is a theorem; record what we see.
      out.exception("min-max-product.min-times-max",
                    cx(k, nullptr, product.to_string(), ctx.b().abs().to_string(), describe(status)));
      out.inapplicable("extrema.square-free-closed-form");
    }
    out.hit({"extrema", k, "",
             "min=" + scan.min.to_string() + "@" + scan.argmin.get_str() + " max=" + scan.max.to_string() + "@" +
                 scan.argmax.get_str(),
             where + ", window=" + scan.window.get_str() + ", " + describe(status)});
  }

  void common_factor(Index k, Partial& out) const {
    for (Index s : kCommonFactorShifts) {
      if (k < s + 2) continue;
      auto v = common_factor_check(table_, k, s);
      std::string note = "s=" + std::to_string(s);
      out.expect("common-factor.numerator-reading", v.holds_numerator_reading(),
                 [&] { return cx(k, nullptr, "C=" + v.c.get_str(), "C | k, primes clear of D_s and B_k/k", note); });
      out.expect("common-factor.padic-reading", v.holds_padic_reading(),
                 [&] { return cx(k, nullptr, "C=" + v.c.get_str(), "C | k, ord_p(B_k/k) <= 0", note); });
      if (v.c > 1) out.hit({"common-factor", k, "", v.c.get_str(), note});
    }
  }

  void bounds(Index k, Partial& out) const {
    Integer kz(k);
    const Rational& b = table_.at(k);
    if (k >= 10) {
      double exact = log_abs(b);
      double est = size_estimate(k, 64);
      double rel = std::fabs(est - exact) / std::fabs(exact);
      out.expect("bounds.size-estimate", rel <= kSizeEstimateTolerance,
                 [&] { return cx(k, nullptr, std::to_string(est), std::to_string(exact), "rel err " + std::to_string(rel)); });
    } else {
      out.inapplicable("bounds.size-estimate");
    }
    if (k >= 4) {
      auto nb = numerator_bound(k);
      out.expect("bounds.numerator-bound", nb.bound_holds && nb.denominator_divides, [&] {
        return cx(k, nullptr, "log|N_k|=" + std::to_string(nb.log_numerator), "< " + std::to_string(nb.log_bound));
      });
    } else {
      out.inapplicable("bounds.numerator-bound");
    }
    FaulhaberPolynomial s(k, table_);
    Integer c = crossover(s);
    bool inside = c > k && c < 2 * kz;
    out.hit({"crossover", k, c.get_str(), inside ? "inside (k, 2k)" : "outside (k, 2k)", ""});
    if (inside) {
      out.pass("bounds.crossover-bracket");
    } else {
      out.exception("bounds.crossover-bracket",
                    cx(k, &c, c.get_str(), "(" + std::to_string(k) + ", " + std::to_string(2 * k) + ")"));
    }
  }

  void numerator_scan(Index k, Partial& out) const {
    const Integer n = table_.at(k).num();
    bool prime = is_prime(n);
    if (prime) out.hit({"prime-numerator", k, "", Integer(abs(n)).get_str(), ""});
    if (k <= kKnownPrimeNumeratorLimit) {
      bool expected = contains(kKnownPrimeNumeratorIndices, k);
      out.expect("numerator-scan.prime-numerators", prime == expected,
                 [&] { return cx(k, nullptr, prime ? "prime" : "not prime", expected ? "prime" : "not prime"); });
    } else {
      out.inapplicable("numerator-scan.prime-numerators");
    }

    auto status = square_free_status_escalating(n, spec_.numerator_scan_trial_bound);
    bool flagged = std::holds_alternative<HasSquareFactor>(status);
    if (flagged) {
      const Integer& p = std::get<HasSquareFactor>(status).p;
      out.hit({"square-factor", k, "", p.get_str() + "^2", describe(status)});
    }
    if (k > kKnownSquareFactorLimit) {
      out.inapplicable("numerator-scan.square-factors");
      return;
    }
    bool listed = contains(kKnownSquareFactorIndices, k);
    if (listed && !flagged) {
      out.exception("numerator-scan.square-factors", cx(k, nullptr, "unknown: " + describe(status), "square factor"));
      return;
    }
    out.expect("numerator-scan.square-factors", flagged == listed,
               [&] { return cx(k, nullptr, describe(status), listed ? "square factor" : "square-free"); });
  }

  const GridSpec& spec_;
  const BernoulliTable& table_;
};

std::vector<Unit> plan_units(const GridSpec& spec, Index numerator_scan_max) {
  std::vector<Unit> units;
  for (CheckGroup g : all_check_groups()) {
    if (!spec.checks.contains(g)) continue;
    Index lo = spec.k_min;
    Index hi = g == CheckGroup::kNumeratorScan ? numerator_scan_max : spec.k_max;
    for (Index k = lo; k <= hi; ++k) {
      bool even = k >= 2 && k % 2 == 0;
      switch (g) {
        case CheckGroup::kBernoulli:
          units.push_back({g, k});
          break;
        case CheckGroup::kFaulhaber:
        case CheckGroup::kRatioSearch:
          if (k >= 1 && (!spec.even_only || k == 1 || even)) units.push_back({g, k});
          break;
        case CheckGroup::kEmScan:
          if (k >= 1) units.push_back({g, k});
          break;
        case CheckGroup::kCommonFactor:
          if (even && k >= 4) units.push_back({g, k});
          break;
        default:
          if (even) units.push_back({g, k});
          break;
      }
    }
  }
  return units;
}

bool hit_less(const Hit& a, const Hit& b) {
  if (a.k != b.k) return a.k < b.k;
  if (a.m != b.m) {
    if (a.m.empty() || b.m.empty()) return a.m.empty();
    return Integer(a.m) < Integer(b.m);
  }
  return a.kind < b.kind;
}

bool counterexample_less(const Counterexample& a, const Counterexample& b) {
  if (a.k != b.k) return a.k < b.k;
  if (a.m != b.m) {
    if (a.m.empty() || b.m.empty()) return a.m.empty();
    return Integer(a.m) < Integer(b.m);
  }
  return false;
}

}  // namespace

std::string_view to_string(CheckGroup group) {
  for (const auto& [g, name] : kGroupNames) {
    if (g == group) return name;
  }
  return "unknown";
}

CheckGroup parse_check_group(std::string_view name) {
  for (const auto& [g, n] : kGroupNames) {
    if (n == name) return g;
  }
  throw std::invalid_argument("unknown check group '" + std::string(name) + "'");
}

const std::vector<CheckGroup>& all_check_groups() {
  static const std::vector<CheckGroup> groups = [] {
    std::vector<CheckGroup> out;
    for (const auto& [g, name] : kGroupNames) out.push_back(g);
    return out;
  }();
  return groups;
}

void GridSpec::validate() const {
  if (k_min > k_max) throw std::invalid_argument("grid: k_min must not exceed k_max");
  if (m_min < 1) throw std::invalid_argument("grid: m_min must be >= 1");
  if (m_min > m_max) throw std::invalid_argument("grid: m_min must not exceed m_max");
  if (checks.empty()) throw std::invalid_argument("grid: no checks selected");
  if (jobs < 1) throw std::invalid_argument("grid: jobs must be >= 1");
  if (extrema_window < 2) throw std::invalid_argument("grid: extrema window must be >= 2");
  if (square_trial_bound < 2 || numerator_scan_trial_bound < 2) throw std::invalid_argument("grid: trial bounds must be >= 2");
}

GridSpec profile_grid(std::string_view profile) {
  GridSpec spec;
  spec.checks.insert(all_check_groups().begin(), all_check_groups().end());
  if (profile == "quick") {
    spec.k_max = 12;
    spec.m_max = 100;
  } else if (profile == "standard") {
    spec.k_max = 40;
    spec.m_max = 300;
  } else if (profile == "extended") {
    spec.k_max = 48;
    spec.m_max = 300;
    spec.numerator_scan_k_max = 250;
  } else {
    throw std::invalid_argument("unknown profile '" + std::string(profile) + "' (quick, standard, extended)");
  }
  return spec;
}

std::uint64_t SweepReport::total_pass() const {
  std::uint64_t n = 0;
  for (const auto& [name, t] : checks) n += t.pass;
  return n;
}

std::uint64_t SweepReport::total_fail() const {
  std::uint64_t n = 0;
  for (const auto& [name, t] : checks) n += t.fail;
  return n;
}

std::uint64_t SweepReport::total_inapplicable() const {
  std::uint64_t n = 0;
  for (const auto& [name, t] : checks) n += t.inapplicable;
  return n;
}

SweepReport run_sweep(const GridSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();

  const Index numerator_scan_max = spec.numerator_scan_k_max == 0 ? spec.k_max : spec.numerator_scan_k_max;
  const Index table_max = std::max(spec.k_max, spec.checks.contains(CheckGroup::kNumeratorScan) ? numerator_scan_max : 0);

  BernoulliTable table;
  if (spec.cache_path) {
    CacheStore cache = cache_load(*spec.cache_path);
    table.seed_from(cache);
    Index before = table.max_index();
    table.extend_to(table_max);
    if (table.max_index() > before || cache.empty()) {
      table.export_to(cache);
      cache_store(cache, *spec.cache_path);
    }
  } else {
    table.extend_to(table_max);
  }

  const auto units = plan_units(spec, numerator_scan_max);
  std::vector<Partial> partials(units.size());
  SweepRunner runner(spec, table);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= units.size()) return;
      try {
        runner.run(units[i], partials[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(units.size());
        return;
      }
    }
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(spec.jobs, static_cast<unsigned>(units.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  SweepReport report;
  report.grid = spec;
  for (auto& p : partials) std::move(p).merge_into(report);
  std::stable_sort(report.hits.begin(), report.hits.end(), hit_less);
  for (auto& [name, tally] : report.checks) {
    std::stable_sort(tally.counterexamples.begin(), tally.counterexamples.end(), counterexample_less);
    std::stable_sort(tally.exceptions.begin(), tally.exceptions.end(), counterexample_less);
  }
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SweepReport verify_all(std::string_view profile, unsigned jobs, std::optional<std::filesystem::path> cache_path) {
  GridSpec spec = profile_grid(profile);
  spec.jobs = jobs;
  spec.cache_path = std::move(cache_path);
  return run_sweep(spec);
}

}  // namespace moser

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "moser/bernoulli.hpp"
#include "moser/cache.hpp"
#include "moser/gcdlab.hpp"
#include "moser/powersum.hpp"
#include "moser/primes.hpp"
#include "moser/report.hpp"
#include "moser/sweeps.hpp"

namespace moser::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

enum class Format { kPlain, kJson, kCsv };

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GlobalOptions {
  Format format = Format::kPlain;
  unsigned jobs = 1;
  std::string cache;
  bool seedless = false;
};

std::optional<fs::path> default_cache_path() {
  if (const char* xdg = std::getenv("XDG_DATA_HOME"); xdg != nullptr && *xdg != '\0') {
    return fs::path(xdg) / "moser-ladder" / "bernoulli.cache";
  }
  if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0') {
    return fs::path(home) / ".local" / "share" / "moser-ladder" / "bernoulli.cache";
  }
  return std::nullopt;
}

// Bernoulli table backed by the on-disk cache unless --seedless.
class Session {
 public:
  explicit Session(const GlobalOptions& options) : options_(options) {
    if (options_.seedless) return;
    cache_path_ = options_.cache.empty() ? default_cache_path() : std::optional<fs::path>(options_.cache);
  }

  [[nodiscard]] std::optional<fs::path> cache_path() const { return cache_path_; }

  const BernoulliTable& table(Index k) {
    if (cache_path_ && !loaded_) {
      cache_ = cache_load(*cache_path_);
      table_.seed_from(cache_);
      loaded_ = true;
    }
    Index before = table_.max_index();
    table_.extend_to(k);
    if (cache_path_ && table_.max_index() > before) {
      table_.export_to(cache_);
      cache_store(cache_, *cache_path_);
    }
    return table_;
  }

 private:
  const GlobalOptions& options_;
  std::optional<fs::path> cache_path_;
  bool loaded_ = false;
  CacheStore cache_;
  BernoulliTable table_;
};

Integer parse_m(const std::string& text, long minimum, const char* what) {
  Integer m;
  try {
    m = parse_integer(text);
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string(what) + ": expected an integer, got '" + text + "'");
  }
  if (m < minimum) throw UsageError(std::string(what) + " must be >= " + std::to_string(minimum));
  return m;
}

void require_even(Index k) {
  if (k < 2 || k % 2 != 0) throw UsageError("K must be even and >= 2");
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

void emit_rows(std::ostream& out, Format format, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::string>>& rows) {
  switch (format) {
    case Format::kJson: {
      json arr = json::array();
      for (const auto& row : rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
        arr.push_back(obj);
      }
      out << json{{"rows", arr}}.dump(2) << "\n";
      break;
    }
    case Format::kCsv: {
      for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_field(columns[i]);
      out << "\r\n";
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
        out << "\r\n";
      }
      break;
    }
    case Format::kPlain: {
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << row[i];
        out << "\n";
      }
      break;
    }
  }
}

// A single value: bare in plain mode, one-row table otherwise.
void emit_value(std::ostream& out, Format format, const std::vector<std::string>& columns,
                const std::vector<std::string>& row, const std::string& plain) {
  if (format == Format::kPlain) {
    out << plain << "\n";
    return;
  }
  if (format == Format::kJson) {
    json obj = json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
    out << obj.dump(2) << "\n";
    return;
  }
  emit_rows(out, format, columns, {row});
}

std::pair<Integer, Integer> parse_range(const std::string& text, const char* what) {
  auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError(std::string("grid: ") + what + " expects LO..HI");
  try {
    return {parse_integer(text.substr(0, dots)), parse_integer(text.substr(dots + 2))};
  } catch (const std::invalid_argument&) {
    throw UsageError(std::string("grid: bad range for ") + what + ": '" + text + "'");
  }
}

Index to_index(const Integer& v, const char* what) {
  if (v < 0 || !v.fits_uint_p()) throw UsageError(std::string("grid: ") + what + " out of range");
  return static_cast<Index>(v.get_ui());
}

// "k=2..20,m=1..300,checks=gcd-ladder+congruence,even,window=5000"
GridSpec parse_grid(const std::string& text) {
  GridSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    std::string key = item.substr(0, eq);
    std::string value = eq == std::string::npos ? "" : item.substr(eq + 1);
    try {
      if (key == "k") {
        auto [lo, hi] = parse_range(value, "k");
        spec.k_min = to_index(lo, "k");
        spec.k_max = to_index(hi, "k");
      } else if (key == "m") {
        std::tie(spec.m_min, spec.m_max) = parse_range(value, "m");
      } else if (key == "checks") {
        std::stringstream cs(value);
        std::string name;
        while (std::getline(cs, name, '+')) {
          if (name == "all") {
            spec.checks.insert(all_check_groups().begin(), all_check_groups().end());
          } else {
            spec.checks.insert(parse_check_group(name));
          }
        }
      } else if (key == "even") {
        spec.even_only = true;
      } else if (key == "budget") {
        spec.extrema_budget = parse_integer(value);
      } else if (key == "window") {
        spec.extrema_window = parse_integer(value);
      } else if (key == "square-bound") {
        spec.square_trial_bound = std::stoull(value);
      } else if (key == "numerator-k") {
        spec.numerator_scan_k_max = static_cast<Index>(std::stoul(value));
      } else if (key == "numerator-bound") {
        spec.numerator_scan_trial_bound = std::stoull(value);
      } else {
        throw UsageError("grid: unknown key '" + key + "'");
      }
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      throw UsageError("grid: bad value for '" + key + "': " + e.what());
    }
  }
  if (spec.checks.empty()) spec.checks.insert(all_check_groups().begin(), all_check_groups().end());
  return spec;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact Bernoulli numbers, power sums and the gcd structure of consecutive power sums"};
  app.name("moserlab");
  app.require_subcommand(0, 1);
  app.fallthrough();

  GlobalOptions global;
  std::string format_text = "plain";
  app.add_option("--format", format_text, "Output format")
      ->check(CLI::IsMember({"plain", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--jobs", global.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--cache", global.cache, "Bernoulli cache file (default: per-user data directory)");
  app.add_flag("--seedless", global.seedless, "Ignore the cache entirely");
  bool help_schema = false;
  app.add_flag("--help-schema", help_schema, "Print the JSON report schema and exit");

  Index k = 0;
  std::string m_text, m_hi_text;

  auto* bern = app.add_subcommand("bern", "Print B_K as N/D");
  bern->add_option("K", k, "Index")->required();

  auto* psum = app.add_subcommand("powersum", "Print S_K(M) = 1^K + ... + (M-1)^K");
  bool naive = false;
  psum->add_option("K", k, "Exponent")->required()->check(CLI::PositiveNumber);
  psum->add_option("M", m_text, "Upper limit (exclusive)")->required();
  psum->add_flag("--naive", naive, "Direct summation instead of Faulhaber's formula");

  auto* gk = app.add_subcommand("gk", "Print g_K(M) = gcd(S_K(M), S_K(M+1)) / M");
  gk->add_option("K", k, "Even index")->required();
  gk->add_option("M", m_text, "M >= 2")->required();

  auto* ladder = app.add_subcommand("ladder", "gcd(S_K(M), M^r) for r = 1, 2, 3, 4, K with closed forms");
  ladder->add_option("K", k, "Even index")->required();
  ladder->add_option("M", m_text, "M >= 1")->required();

  auto* congruence = app.add_subcommand("congruence", "S_K(M) == B_K M modulo M, M^2, M^3 and prime-local variants");
  congruence->add_option("K", k, "Even index")->required();
  congruence->add_option("M", m_text, "M >= 1")->required();

  auto* extrema = app.add_subcommand("extrema", "Scan g_K over 2 <= m <= M for its minimum and maximum");
  bool windowed = false;
  std::uint64_t square_bound = 10'000;
  extrema->add_option("K", k, "Even index")->required();
  extrema->add_option("M", m_text, "Window end")->required();
  extrema->add_flag("--windowed", windowed, "Allow a window below the witnesses D_K, |N_K| and evaluate them separately");
  extrema->add_option("--trial-bound", square_bound, "Square-factor trial bound for |N_K|");

  auto* m4 = app.add_subcommand("m4", "gcd(S_K(m), m^4) / m next to the m^3 closed form");
  m4->add_option("K", k, "Even index")->required();
  m4->add_option("MLO", m_text, "First m")->required();
  m4->add_option("MHI", m_hi_text, "Last m")->required();

  auto* prop = app.add_subcommand("common-factor", "gcd(N_K, D_{K-s}) for s in {2,4,6,8,10,14}");
  prop->add_option("K", k, "Even index")->required();

  auto* cross = app.add_subcommand("crossover", "Smallest m >= 2 with S_K(m) >= m^K");
  cross->add_option("K", k, "Index")->required()->check(CLI::PositiveNumber);

  auto* search = app.add_subcommand("search", "Exhaustive searches");
  search->require_subcommand(1);
  Index kmax = 0;
  std::string mmax_text;
  bool even_only = false;
  auto* ratio = search->add_subcommand("ratio", "(k, m) with S_k(m) | S_k(m+1)");
  ratio->add_option("--kmax", kmax)->required();
  ratio->add_option("--mmax", mmax_text)->required();
  auto* em = search->add_subcommand("em", "(k, m) with S_k(m) = m^k");
  em->add_option("--kmax", kmax)->required();
  em->add_option("--mmax", mmax_text)->required();
  em->add_flag("--even-only", even_only, "Skip odd k >= 3");

  auto* scan = app.add_subcommand("scan", "Index scans");
  scan->require_subcommand(1);
  std::uint64_t trial_bound = 10'000;
  auto* numerators = scan->add_subcommand("numerators", "Primality and square factors of |N_k|");
  numerators->add_option("--kmax", kmax)->required();
  numerators->add_option("--trial-bound", trial_bound, "Largest prime p tested for p^2 | N_k")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Run a verification sweep; exit 1 on any failure");
  std::string profile;
  std::string grid_text;
  bool no_timing = false;
  verify->add_option("PROFILE", profile, "quick, standard or extended")
      ->check(CLI::IsMember({"quick", "standard", "extended"}));
  verify->add_option("--grid", grid_text, "Custom grid, e.g. k=2..20,m=1..300,checks=gcd-ladder+congruence");
  verify->add_flag("--no-timing", no_timing, "Omit the wall-time field");

  auto* cache_cmd = app.add_subcommand("cache", "Cache maintenance");
  cache_cmd->require_subcommand(1);
  auto* cache_build = cache_cmd->add_subcommand("build", "Compute and store B_k for k <= KMAX");
  cache_build->add_option("--kmax", kmax)->required();
  auto* cache_show = cache_cmd->add_subcommand("show", "Print the cached records");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "moserlab: " << e.what() << "\n";
    return kUsage;
  }

  if (help_schema) {
    out << report_json_schema();
    return kOk;
  }
  global.format = format_text == "json" ? Format::kJson : format_text == "csv" ? Format::kCsv : Format::kPlain;
  const Format fmt = global.format;

  try {
    Session session(global);

    if (bern->parsed()) {
      const Rational& b = session.table(k).at(k);
      emit_value(out, fmt, {"k", "value", "numerator", "denominator"},
                 {std::to_string(k), b.to_string(), b.num().get_str(), b.den().get_str()}, b.to_string());
      return kOk;
    }
    if (psum->parsed()) {
      Integer m = parse_m(m_text, 1, "M");
      Integer value = naive ? power_sum_naive(k, m) : FaulhaberPolynomial(k, session.table(k))(m);
      emit_value(out, fmt, {"k", "m", "value"}, {std::to_string(k), m.get_str(), value.get_str()}, value.get_str());
      return kOk;
    }
    if (gk->parsed()) {
      require_even(k);
      Integer m = parse_m(m_text, 2, "M");
      Rational g = g_k(GcdContext(k, session.table(k)), m);
      emit_value(out, fmt, {"k", "m", "g"}, {std::to_string(k), m.get_str(), g.to_string()}, g.to_string());
      return kOk;
    }
    if (ladder->parsed()) {
      require_even(k);
      Integer m = parse_m(m_text, 1, "M");
      GcdContext ctx(k, session.table(k));
      auto row = gcd_ladder(ctx, m);
      std::vector<std::vector<std::string>> rows;
      const std::array<std::string, 5> predicted = {row.predicted_m.get_str(), row.predicted_m2.get_str(),
                                                    row.predicted_m3.get_str(), "no formula", "-"};
      for (std::size_t i = 0; i < row.observed.size(); ++i) {
        std::string status = i < 3 ? (row.observed[i].get_str() == predicted[i] ? "match" : "MISMATCH") : "-";
        rows.push_back({GcdLadder::kColumns[i], row.observed[i].get_str(), predicted[i], status});
      }
      emit_rows(out, fmt, {"modulus", "observed_gcd", "predicted_gcd", "status"}, rows);
      if (fmt == Format::kPlain) out << "g_k(m) = " << Rational(row.observed[4], m).to_string() << "\n";
      return row.matches_closed_forms() && row.monotone() ? kOk : kCheckFailed;
    }
    if (congruence->parsed()) {
      require_even(k);
      Integer m = parse_m(m_text, 1, "M");
      GcdContext ctx(k, session.table(k));
      std::vector<std::vector<std::string>> rows;
      bool ok = true;
      for (unsigned level = 1; level <= 3; ++level) {
        auto v = congruence_check(ctx, m, level);
        ok = ok && (!v.applicable || v.holds);
        rows.push_back({"m^" + std::to_string(level), bool_text(v.applicable), bool_text(v.holds), v.precondition});
      }
      for (const auto& v : local_congruence_checks(ctx, m)) {
        ok = ok && (!v.applicable || v.holds);
        rows.push_back({v.p.get_str() + "^" + std::to_string(v.multiplier * v.exponent), bool_text(v.applicable),
                        bool_text(v.holds), v.multiplier == 2 ? "k >= 4 and p !| D_k" : "k >= 6 and p | B_k"});
      }
      emit_rows(out, fmt, {"modulus", "applicable", "holds", "precondition"}, rows);
      return ok ? kOk : kCheckFailed;
    }
    if (extrema->parsed()) {
      require_even(k);
      Integer m = parse_m(m_text, 2, "M");
      GcdContext ctx(k, session.table(k));
      MinMaxScan s = windowed ? min_max_windowed(ctx, m) : min_max_scan(ctx, m);
      auto status = square_free_status(ctx.n(), std::max<std::uint64_t>(2, square_bound));
      auto v = extrema_verdict(ctx, s, status);
      emit_value(out, fmt,
                 {"k", "window", "min", "argmin", "max", "argmax", "min_times_max", "abs_bernoulli", "square_free",
                  "holds"},
                 {std::to_string(k), s.window.get_str(), s.min.to_string(), s.argmin.get_str(), s.max.to_string(),
                  s.argmax.get_str(), (s.min * s.max).to_string(), ctx.b().abs().to_string(), describe(status),
                  bool_text(v.holds())},
                 "min " + s.min.to_string() + " at m=" + s.argmin.get_str() + ", max " + s.max.to_string() +
                     " at m=" + s.argmax.get_str() + ", min*max " + (s.min * s.max).to_string() + ", |B_k| " +
                     ctx.b().abs().to_string());
      return v.holds() ? kOk : kCheckFailed;
    }
    if (m4->parsed()) {
      require_even(k);
      Integer lo = parse_m(m_text, 1, "MLO");
      Integer hi = parse_m(m_hi_text, 1, "MHI");
      GcdContext ctx(k, session.table(k));
      std::vector<std::vector<std::string>> rows;
      for (const auto& r : m4_explore(ctx, lo, hi)) {
        rows.push_back({r.m.get_str(), r.m4_ratio.to_string(), r.m3_ratio.to_string(), r.m3_predicted.to_string()});
      }
      emit_rows(out, fmt, {"m", "gcd_m4_over_m", "gcd_m3_over_m", "m3_closed_form"}, rows);
      return kOk;
    }
    if (prop->parsed()) {
      require_even(k);
      const auto& table = session.table(k);
      std::vector<std::vector<std::string>> rows;
      bool ok = true;
      for (Index s : kCommonFactorShifts) {
        if (k < s + 2) continue;
        auto v = common_factor_check(table, k, s);
        ok = ok && v.holds();
        rows.push_back({std::to_string(s), v.c.get_str(), bool_text(v.divides_k), bool_text(v.holds_numerator_reading()),
                        bool_text(v.holds_padic_reading())});
      }
      emit_rows(out, fmt, {"s", "gcd", "divides_k", "holds_numerator_reading", "holds_padic_reading"}, rows);
      return ok ? kOk : kCheckFailed;
    }
    if (cross->parsed()) {
      Integer c = crossover(FaulhaberPolynomial(k, session.table(k)));
      bool inside = c > k && c < 2 * Integer(k);
      emit_value(out, fmt, {"k", "crossover", "inside_k_2k"}, {std::to_string(k), c.get_str(), bool_text(inside)},
                 c.get_str());
      return kOk;
    }
    if (ratio->parsed()) {
      Integer mmax = parse_m(mmax_text, 1, "--mmax");
      const auto& table = session.table(std::max<Index>(kmax, 1));
      std::vector<std::vector<std::string>> rows;
      for (Index kk = 1; kk <= kmax; ++kk) {
        for (const auto& h : search_ratio_for(kk, FaulhaberPolynomial(kk, table), mmax)) {
          rows.push_back({std::to_string(h.k), h.m.get_str(), h.quotient.get_str()});
        }
      }
      emit_rows(out, fmt, {"k", "m", "quotient"}, rows);
      return kOk;
    }
    if (em->parsed()) {
      Integer mmax = parse_m(mmax_text, 1, "--mmax");
      const auto& table = session.table(std::max<Index>(kmax, 1));
      std::vector<std::vector<std::string>> rows;
      for (Index kk = 1; kk <= kmax; ++kk) {
        if (even_only && kk > 1 && kk % 2 == 1) continue;
        for (const auto& s : em_scan_for(kk, FaulhaberPolynomial(kk, table), mmax)) {
          rows.push_back({std::to_string(s.k), s.m.get_str()});
        }
      }
      emit_rows(out, fmt, {"k", "m"}, rows);
      return kOk;
    }
    if (numerators->parsed()) {
      if (trial_bound < 2) throw UsageError("--trial-bound must be >= 2");
      const auto& table = session.table(kmax);
      std::vector<std::vector<std::string>> rows;
      for (Index kk = 2; kk <= kmax; kk += 2) {
        Integer n = table.at(kk).num();
        rows.push_back({std::to_string(kk), n.get_str(), bool_text(is_prime(n)),
                        describe(square_free_status(n, trial_bound))});
      }
      emit_rows(out, fmt, {"k", "numerator", "prime", "square_status"}, rows);
      return kOk;
    }
    if (verify->parsed()) {
      GridSpec spec;
      if (!grid_text.empty()) {
        if (!profile.empty()) throw UsageError("verify: give either a PROFILE or --grid, not both");
        spec = parse_grid(grid_text);
      } else {
        spec = profile_grid(profile.empty() ? "quick" : profile);
      }
      spec.jobs = global.jobs;
      spec.cache_path = session.cache_path();
      SweepReport report = run_sweep(spec);
      switch (fmt) {
        case Format::kJson: out << report_to_json(report, !no_timing); break;
        case Format::kCsv: out << report_to_csv(report); break;
        case Format::kPlain: out << report_to_plain(report); break;
      }
      err << "moserlab: " << report.total_fail() << " failure(s) in " << report.wall_time_seconds << " s\n";
      return report.ok() ? kOk : kCheckFailed;
    }
    if (cache_build->parsed()) {
      if (!session.cache_path()) throw UsageError("cache build: no cache path (use --cache, and not --seedless)");
      session.table(kmax);
      err << "moserlab: cache holds B_k for k <= " << cache_load(*session.cache_path()).entries().rbegin()->first
          << "\n";
      return kOk;
    }
    if (cache_show->parsed()) {
      if (!session.cache_path()) throw UsageError("cache show: no cache path (use --cache, and not --seedless)");
      CacheStore store = cache_load(*session.cache_path());
      std::vector<std::vector<std::string>> rows;
      for (const auto& [kk, nd] : store.entries()) {
        rows.push_back({std::to_string(kk), nd.first.get_str(), nd.second.get_str()});
      }
      emit_rows(out, fmt, {"k", "numerator", "denominator"}, rows);
      return kOk;
    }
    out << app.help();
    return kUsage;
  } catch (const CacheError& e) {
    err << "moserlab: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "moserlab: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    err << "moserlab: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "moserlab: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace moser::cli

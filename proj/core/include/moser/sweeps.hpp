#pragma once

// Grid verification: runs the identity, theorem and conjecture checks over
// (k, m) ranges and collects a complete evidence table. Counterexamples are
// recorded, never thrown; every cell ends up as pass, fail or inapplicable.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "moser/bernoulli.hpp"

namespace moser {

enum class CheckGroup {
  kBernoulli,
  kFaulhaber,
  kRatioSearch,
  kEmScan,
  kGcdLadder,
  kCongruence,
  kExtrema,
  kMinMaxProduct,
  kCommonFactor,
  kBounds,
  kNumeratorScan,
};

std::string_view to_string(CheckGroup group);
/// Throws std::invalid_argument for unknown names.
CheckGroup parse_check_group(std::string_view name);
const std::vector<CheckGroup>& all_check_groups();

struct GridSpec {
  Index k_min = 1;
  Index k_max = 12;
  bool even_only = false;  // restricts the odd-k checks (powersum, em-scan) to k = 1 and even k
  Integer m_min = 1;
  Integer m_max = 100;
  std::set<CheckGroup> checks;
  unsigned jobs = 1;
  std::optional<std::filesystem::path> cache_path;

  // Extrema: full exhaustive scan when max(D_k, |N_k|) is at
  // most `extrema_budget`, otherwise scan [2, extrema_window] plus the
  // witnesses D_k and |N_k|.
  Integer extrema_budget = 1'000'000;
  Integer extrema_window = 10'000;
  std::uint64_t square_trial_bound = 10'000;

  // Numerator scans run over even k <= numerator_scan_k_max (0 means
  // the grid's k_max) with escalating trial bounds up to numerator_scan_trial_bound.
  Index numerator_scan_k_max = 0;
  std::uint64_t numerator_scan_trial_bound = 100'000;

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// quick, standard or extended; throws std::invalid_argument otherwise.
GridSpec profile_grid(std::string_view profile);

struct Counterexample {
  Index k = 0;
  std::string m;  // empty for per-index checks
  std::string observed;
  std::string predicted;
  std::string note;
};

struct CheckTally {
  std::uint64_t pass = 0;
  std::uint64_t fail = 0;
  std::uint64_t inapplicable = 0;
  std::vector<Counterexample> counterexamples;  // size() == fail
  std::vector<Counterexample> exceptions;       // reported, not asserted
};

struct Hit {
  std::string kind;
  Index k = 0;
  std::string m;
  std::string value;
  std::string note;
};

struct SweepReport {
  GridSpec grid;
  std::map<std::string, CheckTally> checks;
  std::vector<Hit> hits;  // (k, m, kind) order
  double wall_time_seconds = 0.0;
  std::string tool_version = MOSER_VERSION;

  [[nodiscard]] std::uint64_t total_pass() const;
  [[nodiscard]] std::uint64_t total_fail() const;
  [[nodiscard]] std::uint64_t total_inapplicable() const;
  [[nodiscard]] bool ok() const { return total_fail() == 0; }
};

/// Runs the selected checks. Throws CacheError on cache I/O problems;
/// check failures are reported in the result.
SweepReport run_sweep(const GridSpec& spec);

/// run_sweep(profile_grid(profile)) with every check group selected.
SweepReport verify_all(std::string_view profile, unsigned jobs = 1,
                       std::optional<std::filesystem::path> cache_path = std::nullopt);

}  // namespace moser

#pragma once

#include <string>

#include "moser/sweeps.hpp"

namespace moser {

inline constexpr int kReportSchemaVersion = 1;

/// Keys sorted, arrays in (k, m) order, two-space indent, trailing LF.
/// With include_timing = false the wall-time field is omitted, which makes
/// the output a pure function of the grid and tool version.
std::string report_to_json(const SweepReport& report, bool include_timing = true);

/// One row per check: check,pass,fail,inapplicable,reported.
std::string report_to_csv(const SweepReport& report);

/// Human-readable summary with every counterexample and exception.
std::string report_to_plain(const SweepReport& report);

/// JSON Schema (draft 2020-12) describing report_to_json output.
const std::string& report_json_schema();

/// Escapes a CSV field per RFC 4180 when needed.
std::string csv_field(const std::string& value);

}  // namespace moser

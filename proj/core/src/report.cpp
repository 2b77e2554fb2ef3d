#include "moser/report.hpp"

#include <json.hpp>

#include <sstream>

namespace moser {

namespace {

using nlohmann::json;

json to_json(const Counterexample& c) {
  return json{{"k", c.k}, {"m", c.m}, {"observed", c.observed}, {"predicted", c.predicted}, {"note", c.note}};
}

json grid_json(const GridSpec& g) {
  json checks = json::array();
  for (CheckGroup group : all_check_groups()) {
    if (g.checks.contains(group)) checks.push_back(std::string(to_string(group)));
  }
  // jobs and cache path are deliberately absent: they must not change the report.
  return json{
      {"k_min", g.k_min},
      {"k_max", g.k_max},
      {"even_only", g.even_only},
      {"m_min", g.m_min.get_str()},
      {"m_max", g.m_max.get_str()},
      {"checks", checks},
      {"extrema_budget", g.extrema_budget.get_str()},
      {"extrema_window", g.extrema_window.get_str()},
      {"square_trial_bound", g.square_trial_bound},
      {"numerator_scan_k_max", g.numerator_scan_k_max == 0 ? g.k_max : g.numerator_scan_k_max},
      {"numerator_scan_trial_bound", g.numerator_scan_trial_bound},
  };
}

}  // namespace

std::string report_to_json(const SweepReport& report, bool include_timing) {
  json checks = json::object();
  for (const auto& [name, t] : report.checks) {
    json cxs = json::array();
    for (const auto& c : t.counterexamples) cxs.push_back(to_json(c));
    json exs = json::array();
    for (const auto& c : t.exceptions) exs.push_back(to_json(c));
    checks[name] = json{{"pass", t.pass},
                        {"fail", t.fail},
                        {"inapplicable", t.inapplicable},
                        {"reported", t.exceptions.size()},
                        {"counterexamples", cxs},
                        {"exceptions", exs}};
  }
  json hits = json::array();
  for (const auto& h : report.hits) {
    hits.push_back(json{{"kind", h.kind}, {"k", h.k}, {"m", h.m}, {"value", h.value}, {"note", h.note}});
  }
  json doc{
      {"schema", "moser-ladder-report"},
      {"schema_version", kReportSchemaVersion},
      {"tool_version", report.tool_version},
      {"grid", grid_json(report.grid)},
      {"checks", checks},
      {"hits", hits},
      {"summary",
       json{{"pass", report.total_pass()},
            {"fail", report.total_fail()},
            {"inapplicable", report.total_inapplicable()},
            {"ok", report.ok()}}},
  };
  if (include_timing) doc["wall_time_seconds"] = report.wall_time_seconds;
  return doc.dump(2) + "\n";
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\r\n") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string report_to_csv(const SweepReport& report) {
  std::ostringstream out;
  out << "check,pass,fail,inapplicable,reported\r\n";
  for (const auto& [name, t] : report.checks) {
    out << csv_field(name) << ',' << t.pass << ',' << t.fail << ',' << t.inapplicable << ','
        << t.exceptions.size() << "\r\n";
  }
  return out.str();
}

std::string report_to_plain(const SweepReport& report) {
  std::ostringstream out;
  const auto& g = report.grid;
  out << "grid: k " << g.k_min << ".." << g.k_max << ", m " << g.m_min << ".." << g.m_max << "\n";
  for (const auto& [name, t] : report.checks) {
    out << (t.fail == 0 ? "PASS " : "FAIL ") << name << ": " << t.pass << " pass, " << t.fail << " fail, "
        << t.inapplicable << " inapplicable";
    if (!t.exceptions.empty()) out << ", " << t.exceptions.size() << " reported";
    out << "\n";
    for (const auto& c : t.counterexamples) {
      out << "    counterexample k=" << c.k << (c.m.empty() ? "" : " m=" + c.m) << ": observed " << c.observed
          << ", predicted " << c.predicted << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
    }
    for (const auto& c : t.exceptions) {
      out << "    reported k=" << c.k << (c.m.empty() ? "" : " m=" + c.m) << ": observed " << c.observed
          << ", expected " << c.predicted << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
    }
  }
  for (const auto& h : report.hits) {
    out << "hit " << h.kind << " k=" << h.k << (h.m.empty() ? "" : " m=" + h.m) << ": " << h.value
        << (h.note.empty() ? "" : " (" + h.note + ")") << "\n";
  }
  out << "summary: " << report.total_pass() << " pass, " << report.total_fail() << " fail, "
      << report.total_inapplicable() << " inapplicable\n";
  return out.str();
}

const std::string& report_json_schema() {
  static const std::string schema = R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "$id": "moser-ladder-report/v1",
  "title": "moser-ladder sweep report",
  "type": "object",
  "required": ["schema", "schema_version", "tool_version", "grid", "checks", "hits", "summary"],
  "additionalProperties": false,
  "properties": {
    "schema": {"const": "moser-ladder-report"},
    "schema_version": {"const": 1},
    "tool_version": {"type": "string"},
    "wall_time_seconds": {"type": "number", "minimum": 0},
    "grid": {
      "type": "object",
      "required": ["k_min", "k_max", "even_only", "m_min", "m_max", "checks"],
      "properties": {
        "k_min": {"type": "integer", "minimum": 0},
        "k_max": {"type": "integer", "minimum": 0},
        "even_only": {"type": "boolean"},
        "m_min": {"$ref": "#/$defs/decimal"},
        "m_max": {"$ref": "#/$defs/decimal"},
        "checks": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "extrema_budget": {"$ref": "#/$defs/decimal"},
        "extrema_window": {"$ref": "#/$defs/decimal"},
        "square_trial_bound": {"type": "integer"},
        "numerator_scan_k_max": {"type": "integer"},
        "numerator_scan_trial_bound": {"type": "integer"}
      }
    },
    "checks": {
      "type": "object",
      "additionalProperties": {
        "type": "object",
        "required": ["pass", "fail", "inapplicable", "reported", "counterexamples", "exceptions"],
        "properties": {
          "pass": {"type": "integer", "minimum": 0},
          "fail": {"type": "integer", "minimum": 0},
          "inapplicable": {"type": "integer", "minimum": 0},
          "reported": {"type": "integer", "minimum": 0},
          "counterexamples": {"type": "array", "items": {"$ref": "#/$defs/cell"}},
          "exceptions": {"type": "array", "items": {"$ref": "#/$defs/cell"}}
        }
      }
    },
    "hits": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["kind", "k", "m", "value", "note"],
        "properties": {
          "kind": {"type": "string"},
          "k": {"type": "integer"},
          "m": {"type": "string"},
          "value": {"type": "string"},
          "note": {"type": "string"}
        }
      }
    },
    "summary": {
      "type": "object",
      "required": ["pass", "fail", "inapplicable", "ok"],
      "properties": {
        "pass": {"type": "integer"},
        "fail": {"type": "integer"},
        "inapplicable": {"type": "integer"},
        "ok": {"type": "boolean"}
      }
    }
  },
  "$defs": {
    "decimal": {"type": "string", "pattern": "^-?[0-9]+$"},
    "cell": {
      "type": "object",
      "required": ["k", "m", "observed", "predicted", "note"],
      "properties": {
        "k": {"type": "integer"},
        "m": {"type": "string"},
        "observed": {"type": "string"},
        "predicted": {"type": "string"},
        "note": {"type": "string"}
      }
    }
  }
}
)";
  return schema;
}

}  // namespace moser

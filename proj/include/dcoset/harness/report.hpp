#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcoset/harness/config.hpp"

namespace dcoset::harness {

enum class Status { pass, fail, skipped, error };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::skipped: return "SKIPPED";
    case Status::error: return "ERROR";
  }
  return "?";
}

/// One verified law. `tag` names the identity being checked; `error` is the
/// largest integration error reported by the quantities compared.
struct CheckRecord {
  std::string section;
  std::string name;
  std::string tag;
  double residual = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  Status status = Status::pass;
  std::string note;
  bool counts_toward_error_ceiling = true;
};

struct Report {
  ScenarioConfig config;
  std::vector<std::string> header;
  std::vector<CheckRecord> checks;
  double seconds = 0.0;

  std::size_t count(Status s) const {
    std::size_t n = 0;
    for (const auto& c : checks) n += c.status == s;
    return n;
  }
  bool passed() const { return count(Status::fail) == 0 && count(Status::error) == 0; }

  /// Deterministic text (no timings).
  std::string body() const {
    std::string out = "scenario " + config.name + "\n";
    for (const auto& h : header) out += "  " + h + "\n";
    char line[512];
    std::snprintf(line, sizeof line, "  %-10s %-34s %-28s %-11s %-11s %-11s %s\n", "section", "check", "law", "residual",
                  "error", "tolerance", "status");
    out += line;
    for (const auto& c : checks) {
      std::snprintf(line, sizeof line, "  %-10s %-34s %-28s %-11.3e %-11.3e %-11.3e %s", c.section.c_str(),
                    c.name.c_str(), c.tag.c_str(), c.residual, c.error, c.tolerance, to_string(c.status));
      out += line;
      if (!c.note.empty()) out += "  " + c.note;
      out += "\n";
    }
    std::snprintf(line, sizeof line, "  summary: %zu checks, %zu passed, %zu failed, %zu errors, %zu skipped -> %s\n",
                  checks.size(), count(Status::pass), count(Status::fail), count(Status::error), count(Status::skipped),
                  passed() ? "PASS" : "FAIL");
    out += line;
    return out;
  }

  std::string text() const {
    char t[64];
    std::snprintf(t, sizeof t, "  elapsed: %.2f s\n", seconds);
    return body() + t;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["scenario"] = config.name;
    j["group"] = config.group;
    j["K"] = config.K;
    j["H"] = config.H;
    j["scheme"] = config.scheme;
    j["seed"] = config.seed;
    j["header"] = header;
    j["passed"] = passed();
    j["elapsed_seconds"] = seconds;
    auto& arr = j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
      arr.push_back({{"section", c.section},
                     {"check", c.name},
                     {"law", c.tag},
                     {"residual", c.residual},
                     {"error", c.error},
                     {"tolerance", c.tolerance},
                     {"status", to_string(c.status)},
                     {"note", c.note}});
    }
    return j;
  }

  /// scenario,check,residual,tolerance rows (header written by the caller).
  std::string csv_rows() const {
    std::string out;
    char line[512];
    for (const auto& c : checks) {
      std::snprintf(line, sizeof line, "%s,%s,%.17g,%.17g\n", config.name.c_str(), c.name.c_str(), c.residual,
                    c.tolerance);
      out += line;
    }
    return out;
  }
};

inline const char* csv_header() { return "scenario,check,residual,tolerance\n"; }

}  // namespace dcoset::harness

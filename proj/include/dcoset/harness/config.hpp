#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dcoset/errors.hpp"
#include "dcoset/quadrature.hpp"

namespace dcoset::harness {

struct Tolerances {
  double exact = 1e-12;          // finite-group identities
  double slack = 5.0;            // charted residual <= slack * reported error (+ exact)
  double coords = 1e-9;          // canonical forms and actions
  double modular = 1e-8;         // modular certification at doubled resolution
  double roundtrip = 1e-6;       // charted rho -> lambda -> rho' ratio spread
  double covariance = 1e-6;      // relative covariance of quadrature-defined rho
  double reported_error = 1e-6;  // ceiling on any reported integration error
};

struct ScenarioConfig {
  std::string name;
  std::string group;
  std::string K = "e";
  std::string H = "e";
  std::string scheme = "exact-sum";
  int points = 64;
  std::size_t mc_samples = 20000;
  std::uint64_t seed = 1;
  int samples = 4;  // random draws per sampled check on charted groups
  double u_halfwidth = 0.5;
  std::string cover_region = "all";
  int cover_grid = 9;
  Tolerances tolerance;
  bool concurrent = false;

  IntegrationScheme integration_scheme() const {
    if (scheme == "exact-sum") return ExactSum{};
    if (scheme == "tensor") {
      if (points < 4 || points % 2 != 0) throw ConfigurationError("points must be even and at least 4");
      return TensorQuadrature{points};
    }
    if (scheme == "monte-carlo") return MonteCarlo{mc_samples, seed, 0};
    throw ConfigurationError("unknown scheme '" + scheme + "'");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigurationError(key + ": '" + v + "' is not a number");
  return out;
}

inline long long parse_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long out = 0;
  try {
    out = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw ConfigurationError(key + ": '" + v + "' is not an integer");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigurationError(key + ": '" + v + "' is not a boolean");
}

}  // namespace detail

/// Flat `key = value` text, one key per line; `#` starts a comment.
/// Unknown keys are errors.
inline ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigurationError("line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto v = detail::trim(line.substr(eq + 1));
    auto positive = [&](double x) {
      if (!(x > 0.0)) throw ConfigurationError(key + " must be positive");
      return x;
    };
    if (key == "name") c.name = v;
    else if (key == "group") c.group = v;
    else if (key == "K") c.K = v;
    else if (key == "H") c.H = v;
    else if (key == "scheme") c.scheme = v;
    else if (key == "points") c.points = static_cast<int>(detail::parse_integer(key, v));
    else if (key == "mc_samples") c.mc_samples = static_cast<std::size_t>(detail::parse_integer(key, v));
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(detail::parse_integer(key, v));
    else if (key == "samples") c.samples = static_cast<int>(detail::parse_integer(key, v));
    else if (key == "u_halfwidth") c.u_halfwidth = positive(detail::parse_real(key, v));
    else if (key == "cover_region") c.cover_region = v;
    else if (key == "cover_grid") c.cover_grid = static_cast<int>(detail::parse_integer(key, v));
    else if (key == "concurrent") c.concurrent = detail::parse_bool(key, v);
    else if (key == "tolerance.exact") c.tolerance.exact = positive(detail::parse_real(key, v));
    else if (key == "tolerance.slack") c.tolerance.slack = positive(detail::parse_real(key, v));
    else if (key == "tolerance.coords") c.tolerance.coords = positive(detail::parse_real(key, v));
    else if (key == "tolerance.modular") c.tolerance.modular = positive(detail::parse_real(key, v));
    else if (key == "tolerance.roundtrip") c.tolerance.roundtrip = positive(detail::parse_real(key, v));
    else if (key == "tolerance.covariance") c.tolerance.covariance = positive(detail::parse_real(key, v));
    else if (key == "tolerance.reported_error") c.tolerance.reported_error = positive(detail::parse_real(key, v));
    else throw ConfigurationError("unknown key '" + key + "' on line " + std::to_string(lineno));
  }
  if (c.group.empty()) throw ConfigurationError("config names no group");
  if (c.name.empty()) c.name = c.group + "-" + c.K + "-" + c.H;
  if (c.samples < 1) throw ConfigurationError("samples must be at least 1");
  if (c.cover_grid < 2) throw ConfigurationError("cover_grid must be at least 2");
  c.integration_scheme();
  return c;
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

/// Chart box "lo,hi;lo,hi;..." (or "all").
inline Box parse_region(const std::string& text) {
  Box box;
  std::stringstream in(text);
  std::string axis;
  while (std::getline(in, axis, ';')) {
    const auto comma = axis.find(',');
    if (comma == std::string::npos) throw ConfigurationError("cover_region axis '" + axis + "' needs lo,hi");
    const double lo = detail::parse_real("cover_region", detail::trim(axis.substr(0, comma)));
    const double hi = detail::parse_real("cover_region", detail::trim(axis.substr(comma + 1)));
    if (!(hi > lo)) throw ConfigurationError("cover_region axis '" + axis + "' is empty");
    box.push_back({lo, hi});
  }
  return box;
}

}  // namespace dcoset::harness

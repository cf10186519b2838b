// dcoset: run double-coset verification scenarios.
//
//   dcoset verify <config-path> [--seed N] [--resolution N] [--report out.json] [--csv out.csv]
//   dcoset verify --all [...]
//   dcoset catalog
//
// Exit status: 0 all checks pass, 1 a check failed or errored, 2 configuration error.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcoset/harness/ship_suite.hpp"

namespace {

using namespace dcoset::harness;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw dcoset::ConfigurationError("cannot write " + path);
  out << text;
}

int verify(const std::string& config_path, bool all, const Overrides& overrides, const std::string& report_path,
           const std::string& csv_path) {
  std::vector<ScenarioConfig> configs;
  if (all) {
    configs = ship_suite();
  } else {
    if (config_path.empty()) throw dcoset::ConfigurationError("verify needs a config path or --all");
    configs.push_back(load_config(config_path));
  }
  for (auto& c : configs) c = apply(c, overrides);

  std::vector<Report> reports;
  double seconds = 0.0;
  for (const auto& c : configs) {
    reports.push_back(run_scenario(c));
    std::cout << reports.back().text() << std::flush;
    seconds += reports.back().seconds;
  }

  bool passed = true;
  for (const auto& r : reports) passed = passed && r.passed();
  if (all) {
    std::size_t failing = 0;
    for (const auto& r : reports) failing += !r.passed();
    char line[128];
    std::snprintf(line, sizeof line, "suite: %zu scenarios, %zu failing, %.1f s -> %s\n", reports.size(), failing,
                  seconds, passed ? "PASS" : "FAIL");
    std::cout << line;
  }

  if (!report_path.empty()) {
    nlohmann::json j;
    if (all) {
      j["passed"] = passed;
      j["scenarios"] = nlohmann::json::array();
      for (const auto& r : reports) j["scenarios"].push_back(r.to_json());
    } else {
      j = reports.front().to_json();
    }
    write_file(report_path, j.dump(2) + "\n");
  }
  if (!csv_path.empty()) {
    std::string csv = csv_header();
    for (const auto& r : reports) csv += r.csv_rows();
    write_file(csv_path, csv);
  }
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify rho-functions and quasi-invariant measures on double coset spaces K\\G/H"};
  app.require_subcommand(1);

  std::string config_path, report_path, csv_path;
  bool all = false;
  std::uint64_t seed = 0;
  int resolution = 0;
  bool concurrent = false;

  auto* verify_cmd = app.add_subcommand("verify", "Run one scenario config, or the ship suite with --all");
  verify_cmd->add_option("config", config_path, "Scenario config file (key = value lines)");
  verify_cmd->add_flag("--all", all, "Run the ship suite");
  auto* seed_opt = verify_cmd->add_option("--seed", seed, "Override the scenario seed");
  auto* res_opt = verify_cmd->add_option("--resolution", resolution, "Override quadrature points per axis");
  verify_cmd->add_option("--report", report_path, "Write a JSON report");
  verify_cmd->add_option("--csv", csv_path, "Write check,residual,tolerance rows");
  verify_cmd->add_flag("--concurrent", concurrent, "Evaluate the checks of a scenario concurrently");

  auto* catalog_cmd = app.add_subcommand("catalog", "List groups, subgroups and ship scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (catalog_cmd->parsed()) {
      std::cout << list_catalog().text();
      return 0;
    }
    if (all && !config_path.empty()) throw dcoset::ConfigurationError("give either a config path or --all");
    Overrides o;
    if (*seed_opt) o.seed = seed;
    if (*res_opt) o.resolution = resolution;
    o.concurrent = concurrent;
    return verify(config_path, all, o, report_path, csv_path);
  } catch (const dcoset::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dcoset/harness/ship_suite.hpp"

namespace {

using namespace dcoset::harness;

const CheckRecord* find(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

double max_residual(const Report& r) {
  double m = 0.0;
  for (const auto& c : r.checks) m = std::max(m, c.residual);
  return m;
}

double max_error(const Report& r) {
  double m = 0.0;
  for (const auto& c : r.checks)
    if (c.counts_toward_error_ceiling) m = std::max(m, c.error);
  return m;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

int failures = 0;

void print(int n, const char* title, const Outcome& o, const std::string& summary) {
  std::printf("criterion %d %-22s %s  %s%s%s\n", n, title, o.pass ? "PASS" : "FAIL", summary.c_str(),
              o.detail.empty() ? "" : "  failed: ", o.detail.c_str());
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(const char* f, double v) {
  char b[64];
  std::snprintf(b, sizeof b, f, v);
  return b;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto suite_start = clock::now();
  std::map<std::string, Report> reports;
  std::vector<std::string> order;
  bool suite_ok = true;
  for (const auto& c : ship_suite()) {
    try {
      reports.emplace(c.name, run_scenario(c));
      order.push_back(c.name);
      std::printf("  ran %-18s %s  %.2f s\n", c.name.c_str(), reports.at(c.name).passed() ? "PASS" : "FAIL",
                  reports.at(c.name).seconds);
    } catch (const std::exception& e) {
      suite_ok = false;
      std::printf("  ran %-18s ERROR %s\n", c.name.c_str(), e.what());
    }
    std::fflush(stdout);
  }
  const double suite_seconds = std::chrono::duration<double>(clock::now() - suite_start).count();
  auto has = [&](const std::string& n) { return reports.count(n) != 0; };

  // 1. Finite exactness.
  {
    Outcome o;
    double worst = 0.0, seconds = 0.0;
    for (const auto* n : {"S3-KH12", "S4-klein", "D4-s-r2"}) {
      if (!has(n)) {
        o.require(false, std::string(n) + " did not run");
        continue;
      }
      const auto& r = reports.at(n);
      o.require(r.passed(), std::string(n) + " has failing checks");
      worst = std::max(worst, max_residual(r));
      seconds += r.seconds;
    }
    o.require(worst <= 1e-12, "residual above 1e-12");
    o.require(seconds < 10.0, "runtime above 10 s");
    print(1, "finite-exactness", o, "max residual " + fmt("%.3e", worst) + ", " + fmt("%.2f", seconds) + " s");
  }

  // 2. Heisenberg quadrature.
  {
    Outcome o;
    std::string summary = "not run";
    if (has("heisenberg-center")) {
      const auto& r = reports.at("heisenberg-center");
      double worst_ratio = 0.0;
      for (const auto& c : r.checks) {
        if (c.status == Status::skipped) continue;
        if (c.error > 0.0) worst_ratio = std::max(worst_ratio, c.residual / (5.0 * c.error + 1e-12));
        o.require(c.status == Status::pass, c.name + " " + to_string(c.status));
      }
      o.require(max_error(r) <= 1e-6, "reported error above 1e-6");
      o.require(r.seconds < 180.0, "runtime above 3 min");
      summary = "max error " + fmt("%.3e", max_error(r)) + ", worst residual/(5 error) " + fmt("%.3f", worst_ratio) +
                ", " + fmt("%.1f", r.seconds) + " s";
    } else {
      o.require(false, "heisenberg-center did not run");
    }
    print(2, "heisenberg", o, summary);
  }

  // 3. ax+b covariance and modular certification.
  {
    Outcome o;
    std::string summary;
    for (const auto* n : {"axb-translations", "axb-dilations"}) {
      if (!has(n)) {
        o.require(false, std::string(n) + " did not run");
        continue;
      }
      const auto& r = reports.at(n);
      const auto* cov = find(r, "rho-f-covariance-relative");
      const auto* mod = find(r, "modular-residual");
      o.require(cov && cov->residual <= 1e-6, std::string(n) + " relative covariance");
      o.require(mod && mod->residual <= 1e-8, std::string(n) + " modular residual");
      o.require(r.passed(), std::string(n) + " has failing checks");
      if (cov && mod) {
        summary += std::string(summary.empty() ? "" : ", ") + n + " cov " + fmt("%.2e", cov->residual) + " mod " +
                   fmt("%.2e", mod->residual);
      }
    }
    print(3, "axb", o, summary);
  }

  // 4. Round trip rho -> lambda -> rho'.
  {
    Outcome o;
    double finite = 0.0, heis = -1.0;
    for (const auto& n : order) {
      const auto* c = find(reports.at(n), "round-trip");
      if (!c || c->status == Status::skipped) continue;
      if (reports.at(n).config.scheme == "exact-sum") {
        finite = std::max(finite, c->residual);
        o.require(c->residual <= 1e-12, n + " spread above 1e-12");
      } else if (n == "heisenberg-center") {
        heis = c->residual;
        o.require(c->residual <= 1e-6, n + " spread above 1e-6");
      }
    }
    o.require(heis >= 0.0, "heisenberg round trip missing");
    print(4, "round-trip", o, "finite spread " + fmt("%.3e", finite) + ", heisenberg spread " + fmt("%.3e", heis));
  }

  // 5. Equivalence of two independent rho on finite scenarios.
  {
    Outcome o;
    double worst = 0.0;
    int scenarios = 0;
    for (const auto& n : order) {
      const auto& r = reports.at(n);
      if (r.config.scheme != "exact-sum") continue;
      ++scenarios;
      const auto* nulls = find(r, "null-class-equality");
      const auto* dens = find(r, "classwise-density");
      o.require(nulls && nulls->status == Status::pass, n + " null classes differ");
      o.require(dens && dens->residual <= 1e-12, n + " classwise ratio");
      if (dens) worst = std::max(worst, dens->residual);
    }
    o.require(scenarios > 0, "no finite scenario");
    print(5, "equivalence", o,
          std::to_string(scenarios) + " finite scenarios, worst classwise ratio residual " + fmt("%.3e", worst));
  }

  // 6. Positivity and the zeroed-rho counterexample.
  {
    Outcome o;
    int positive = 0, counter = 0;
    for (const auto& n : order) {
      const auto& r = reports.at(n);
      const auto* pos = find(r, "covering-positivity");
      o.require(pos && pos->status == Status::pass, n + " covering rho not positive");
      positive += pos && pos->status == Status::pass;
      if (r.config.scheme == "exact-sum") {
        const auto* ce = find(r, "support-counterexample");
        o.require(ce && ce->status == Status::pass, n + " counterexample not detected");
        counter += ce && ce->status == Status::pass;
      }
    }
    o.require(!order.empty(), "no scenario ran");
    print(6, "positivity", o,
          "positive in " + std::to_string(positive) + " scenarios, counterexample caught in " + std::to_string(counter));
  }

  // 7. Determinism: rerun and compare report bodies byte for byte.
  {
    Outcome o;
    int compared = 0;
    for (const auto* n : {"S3-KH12", "S4-klein", "D4-s-r2", "axb-dilations", "axb-translations"}) {
      if (!has(n)) continue;
      auto c = ship_scenario(n);
      const auto again = run_scenario(c);
      o.require(again.body() == reports.at(n).body(), std::string(n) + " sequential body differs");
      c.concurrent = true;
      const auto threaded = run_scenario(c);
      o.require(threaded.body() == reports.at(n).body(), std::string(n) + " concurrent body differs");
      ++compared;
    }
    o.require(compared == 5, "scenarios missing");
    print(7, "determinism", o, std::to_string(compared) + " scenarios, sequential and concurrent reruns");
  }

  // 8. Ship suite.
  {
    Outcome o;
    std::size_t failing = 0;
    for (const auto& n : order) failing += !reports.at(n).passed();
    o.require(suite_ok && order.size() == kShipSuite.size(), "scenario aborted");
    o.require(failing == 0, std::to_string(failing) + " failing scenarios");
    o.require(suite_seconds < 300.0, "runtime above 5 min");
    print(8, "ship-suite", o,
          std::to_string(order.size()) + " scenarios, " + std::to_string(failing) + " failing, " +
              fmt("%.1f", suite_seconds) + " s");
  }

  return failures == 0 ? 0 : 1;
}

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "dcoset/harness/runner.hpp"

namespace dcoset::harness {

/// The scenarios run by `verify --all`, in execution order. The text mirrors
/// scenarios/<name>.conf.
inline constexpr std::array<std::string_view, 10> kShipSuite = {
    R"(name = S3-KH12
group = S3
K = <(12)>
H = <(12)>
)",
    R"(name = trivial
group = S3
K = e
H = e
)",
    R"(name = S3-right
group = S3
K = <(12)>
H = e
)",
    R"(name = S4-klein
group = S4
K = klein4
H = <(12)>
)",
    R"(name = S4-classical
group = S4
K = e
H = <(12)>
)",
    R"(name = D4-s-r2
group = D4
K = <s>
H = <r2>
)",
    R"(name = axb-dilations
group = axb
K = e
H = dilations
scheme = tensor
points = 64
seed = 3
samples = 4
u_halfwidth = 0.5
cover_region = 0.8,1.25;-3,3
cover_grid = 17
)",
    R"(name = axb-translations
group = axb
K = e
H = translations
scheme = tensor
points = 64
seed = 5
samples = 4
u_halfwidth = 0.5
cover_region = 0.5,2;-0.5,0.5
cover_grid = 17
)",
    R"(name = heisenberg-center
group = heisenberg
K = center
H = x-axis
scheme = tensor
points = 64
seed = 7
samples = 4
u_halfwidth = 1.0
cover_region = -1,1;-2,2;-1,1
cover_grid = 17
)",
    R"(name = se2-rotations
group = se2
K = SO(2)
H = SO(2)
scheme = tensor
points = 48
seed = 11
samples = 4
u_halfwidth = 0.5
cover_region = -3,3;-2,2;-2,2
cover_grid = 9
)",
};

inline std::vector<ScenarioConfig> ship_suite() {
  std::vector<ScenarioConfig> out;
  for (auto text : kShipSuite) out.push_back(parse_config(std::string(text)));
  return out;
}

inline ScenarioConfig ship_scenario(const std::string& name) {
  for (auto& c : ship_suite())
    if (c.name == name) return c;
  throw ConfigurationError("no ship scenario named '" + name + "'");
}

/// Command-line overrides applied on top of a loaded config.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  bool concurrent = false;
};

inline ScenarioConfig apply(ScenarioConfig c, const Overrides& o) {
  if (o.seed) c.seed = *o.seed;
  if (o.resolution) c.points = *o.resolution;
  c.concurrent = c.concurrent || o.concurrent;
  c.integration_scheme();
  return c;
}

inline std::vector<Report> run_ship_suite(const Overrides& o = {}) {
  std::vector<Report> out;
  for (const auto& c : ship_suite()) out.push_back(run_scenario(apply(c, o)));
  return out;
}

// ----------------------------------------------------------------- listing

struct GroupListing {
  std::string name;
  std::string description;
  std::vector<CatalogEntry> subgroups;
};

struct ScenarioListing {
  std::string name;
  std::string group;
  CatalogEntry K;
  CatalogEntry H;
  std::string N;
  bool n_open = false;
};

struct CatalogListing {
  std::vector<GroupListing> groups;
  std::vector<ScenarioListing> scenarios;

  std::string text() const {
    std::string out = "groups\n";
    for (const auto& g : groups) {
      out += "  " + g.name + "  (" + g.description + ")\n";
      for (const auto& s : g.subgroups) out += "    " + s.subgroup + "  [" + s.flags + "]\n";
    }
    out += "scenarios\n";
    for (const auto& s : scenarios) {
      out += "  " + s.name + "  G=" + s.group + "  K=" + s.K.subgroup + " [" + s.K.flags + "]  H=" + s.H.subgroup +
             " [" + s.H.flags + "]  N=" + s.N + (s.n_open ? " [N-open]" : " [N not open]") + "\n";
    }
    return out;
  }
};

inline CatalogListing list_catalog() {
  CatalogListing out;
  auto entry = [](const std::string& group, const auto& S) { return CatalogEntry{group, S.name(), flag_text(S.flags())}; };

  const std::vector<std::pair<std::string, std::vector<std::string>>> finite = {
      {"S3", {"e", "<(12)>", "<(123)>", "G"}},
      {"S4", {"e", "<(12)>", "klein4", "G"}},
      {"D4", {"e", "<s>", "<r2>", "<r>", "G"}},
  };
  for (const auto& [name, subs] : finite) {
    const auto g = make_finite_group(name);
    GroupListing gl{name, "finite, order " + std::to_string(g.order()) + ", counting Haar measure", {}};
    for (const auto& s : subs) gl.subgroups.push_back(entry(name, make_finite_subgroup(g, s)));
    out.groups.push_back(std::move(gl));
  }
  {
    const AffineGroup g;
    GroupListing gl{"axb", "charted (0,inf) x R, left Haar da db/a^2, modular 1/a", {}};
    for (const auto* s : {"e", "dilations", "translations"}) gl.subgroups.push_back(entry("axb", affine_subgroup(g, s)));
    out.groups.push_back(std::move(gl));
  }
  {
    const HeisenbergGroup g;
    GroupListing gl{"heisenberg", "charted R^3, Haar dx dy dz, unimodular", {}};
    for (const auto* s : {"e", "center", "x-axis"}) gl.subgroups.push_back(entry("heisenberg", heisenberg_subgroup(g, s)));
    out.groups.push_back(std::move(gl));
  }
  {
    const EuclideanMotionGroup g;
    GroupListing gl{"se2", "charted (-pi,pi) x R^2, Haar dtheta dx dy, unimodular", {}};
    for (const auto* s : {"e", "SO(2)"}) gl.subgroups.push_back(entry("se2", motion_subgroup(g, s)));
    out.groups.push_back(std::move(gl));
  }

  for (const auto& c : ship_suite()) {
    out.scenarios.push_back(visit_kit(c, [&](auto& kit) {
      const auto& sp = *kit.space;
      std::string n = sp.N().name();
      if constexpr (std::remove_cvref_t<decltype(sp.group())>::is_finite) n += " order " + std::to_string(sp.N().order());
      return ScenarioListing{c.name, c.group, entry(c.group, sp.K()), entry(c.group, sp.H()), n, sp.n_is_open()};
    }));
  }
  return out;
}

}  // namespace dcoset::harness

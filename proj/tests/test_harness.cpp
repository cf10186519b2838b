#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "dcoset/harness/ship_suite.hpp"

namespace {

using namespace dcoset;
using namespace dcoset::harness;

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(Config, ParsesKeysAndComments) {
  const auto c = parse_config(
      "# comment\nname = x\ngroup = heisenberg\nK = center\nH = x-axis\nscheme = tensor\npoints = 32  # trailing\n"
      "tolerance.slack = 2.5e0\nconcurrent = true\n");
  EXPECT_EQ(c.name, "x");
  EXPECT_EQ(c.points, 32);
  EXPECT_EQ(c.tolerance.slack, 2.5);
  EXPECT_TRUE(c.concurrent);
  EXPECT_EQ(describe(c.integration_scheme()), describe(IntegrationScheme{TensorQuadrature{32}}));
}

TEST(Config, DefaultNameFromTriple) { EXPECT_EQ(parse_config("group = S3\nK = e\n").name, "S3-e-e"); }

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("group = S3\ntolerence.exact = 1e-12\n"), ConfigurationError);
  EXPECT_THROW(parse_config("group = S3\npoints = many\n"), ConfigurationError);
  EXPECT_THROW(parse_config("group = S3\ntolerance.exact = -1\n"), ConfigurationError);
  EXPECT_THROW(parse_config("group = S3\nscheme = simpson\n"), ConfigurationError);
  EXPECT_THROW(parse_config("group = S3\njust words\n"), ConfigurationError);
  EXPECT_THROW(parse_config("K = e\n"), ConfigurationError);
  EXPECT_THROW(parse_config("group = axb\nscheme = tensor\npoints = 7\n"), ConfigurationError);
  EXPECT_THROW(load_config("/nonexistent/path.conf"), ConfigurationError);
}

TEST(Config, UnknownCatalogNamesAreConfigurationErrors) {
  EXPECT_THROW(run_scenario(parse_config("group = S5\n")), ConfigurationError);
  EXPECT_THROW(run_scenario(parse_config("group = S3\nK = <(45)>\n")), ConfigurationError);
  EXPECT_THROW(run_scenario(parse_config("group = S3\nscheme = tensor\n")), ConfigurationError);
  EXPECT_THROW(run_scenario(parse_config("group = axb\nscheme = exact-sum\nH = translations\n")), ConfigurationError);
}

TEST(Config, RegionParsing) {
  const auto b = parse_region("-1,1; 0.5,2");
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[1].lo, 0.5);
  EXPECT_THROW(parse_region("1,-1"), ConfigurationError);
  EXPECT_THROW(parse_region("1"), ConfigurationError);
}

TEST(ShipSuite, EmbeddedConfigsMatchScenarioFiles) {
  const std::filesystem::path dir = DCOSET_SCENARIO_DIR;
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files += e.path().extension() == ".conf";
  EXPECT_EQ(files, kShipSuite.size());
  for (auto text : kShipSuite) {
    const auto c = parse_config(std::string(text));
    const auto path = dir / (c.name + ".conf");
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(read_file(path), std::string(text)) << path;
  }
}

TEST(ShipSuite, OverridesApply) {
  Overrides o;
  o.seed = 99;
  o.resolution = 32;
  o.concurrent = true;
  const auto c = apply(ship_scenario("heisenberg-center"), o);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.points, 32);
  EXPECT_TRUE(c.concurrent);
  o.resolution = 3;
  EXPECT_THROW(apply(ship_scenario("heisenberg-center"), o), ConfigurationError);
  EXPECT_THROW(ship_scenario("nope"), ConfigurationError);
}

TEST(Catalog, ListsGroupsFlagsAndScenarios) {
  const auto listing = list_catalog();
  std::vector<std::string> names;
  for (const auto& g : listing.groups) names.push_back(g.name);
  EXPECT_EQ(names, (std::vector<std::string>{"S3", "S4", "D4", "axb", "heisenberg", "se2"}));
  bool heis = false, se2 = false;
  for (const auto& s : listing.scenarios) {
    if (s.name == "heisenberg-center") {
      heis = true;
      EXPECT_NE(s.K.flags.find("normal"), std::string::npos);
      EXPECT_EQ(s.N, "G");
      EXPECT_TRUE(s.n_open);
    }
    if (s.name == "se2-rotations") {
      se2 = true;
      EXPECT_NE(s.K.flags.find("IN"), std::string::npos);
      EXPECT_NE(s.K.flags.find("compact"), std::string::npos);
      EXPECT_FALSE(s.n_open);
    }
  }
  EXPECT_TRUE(heis && se2);
  EXPECT_NE(listing.text().find("N-open"), std::string::npos);
}

TEST(Runner, FiniteScenarioPassesWithZeroResiduals) {
  const auto r = run_scenario(ship_scenario("S3-KH12"));
  EXPECT_TRUE(r.passed()) << r.text();
  EXPECT_EQ(r.count(Status::fail), 0u);
  EXPECT_GT(r.checks.size(), 30u);
  for (const auto& c : r.checks) EXPECT_LE(c.residual, 1e-12) << c.name;
}

TEST(Runner, TrivialScenarioReducesToTheGroup) {
  const auto r = run_scenario(ship_scenario("trivial"));
  EXPECT_TRUE(r.passed()) << r.text();
}

TEST(Runner, ReportBodyIsDeterministicSequentialAndConcurrent) {
  auto c = ship_scenario("S4-klein");
  const auto a = run_scenario(c);
  const auto b = run_scenario(c);
  c.concurrent = true;
  const auto d = run_scenario(c);
  EXPECT_EQ(a.body(), b.body());
  EXPECT_EQ(a.body(), d.body());
}

TEST(Runner, JsonAndCsvCarryEveryCheck) {
  const auto r = run_scenario(ship_scenario("D4-s-r2"));
  const auto j = r.to_json();
  EXPECT_EQ(j["scenario"], "D4-s-r2");
  EXPECT_EQ(j["checks"].size(), r.checks.size());
  EXPECT_EQ(j["passed"], true);
  const auto csv = r.csv_rows();
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), r.checks.size());
  EXPECT_EQ(std::string(csv_header()), "scenario,check,residual,tolerance\n");
}

TEST(Runner, AffineTranslationsPass) {
  const auto r = run_scenario(ship_scenario("axb-translations"));
  EXPECT_TRUE(r.passed()) << r.text();
}

}  // namespace

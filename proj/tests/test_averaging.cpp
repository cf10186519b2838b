#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dcoset/averaging.hpp"
#include "dcoset/harness/catalog.hpp"

namespace {

using namespace dcoset;

DoubleCosetSpace<FiniteGroup> finite_space(const FiniteGroup& g, const char* K, const char* H) {
  return make_finite_space(g, harness::make_finite_subgroup(g, K), harness::make_finite_subgroup(g, H));
}

// Q(f)(p) summed over the subgroup members with raw permutation products.
double brute_q(const FiniteGroup& g, const Subgroup<FiniteGroup>& K, const Subgroup<FiniteGroup>& H,
               const std::vector<double>& f, FiniteElement p) {
  double sum = 0.0;
  for (auto k : K.members()) {
    for (auto h : H.members()) {
      const auto &pk = g.permutation(g.inv(k)), &pp = g.permutation(p), &ph = g.permutation(h);
      Permutation x(g.degree());
      for (int i = 0; i < g.degree(); ++i) x[i] = pk[pp[ph[i]]];
      sum += f[g.find(x)->index];
    }
  }
  return sum;
}

TEST(Averaging, IndicatorOfIdentityOnS3) {
  const auto g = harness::make_finite_group("S3");
  const auto space = finite_space(g, "<(12)>", "<(12)>");
  std::vector<double> v(6, 0.0);
  v[g.identity().index] = 1.0;
  const auto f = table_function(g, v);
  // k = h in <(12)> gives k^-1 e h = e twice under counting measure.
  EXPECT_EQ(q_apply(space, f, g.identity(), ExactSum{}).value, 2.0);
  EXPECT_EQ(q_apply(space, f, g.parse("(123)"), ExactSum{}).value, 0.0);
}

TEST(Averaging, MatchesBruteForceOnEveryCatalogPair) {
  std::mt19937_64 rng(17);
  for (const auto& [G, K, H] : std::vector<std::tuple<const char*, const char*, const char*>>{
           {"S3", "<(12)>", "<(12)>"}, {"S4", "klein4", "<(12)>"}, {"D4", "<s>", "<r2>"}, {"S3", "e", "e"}}) {
    const auto g = harness::make_finite_group(G);
    const auto space = finite_space(g, K, H);
    std::vector<double> v(g.order());
    std::uniform_int_distribution<int> d(0, 64);
    for (auto& x : v) x = d(rng) / 64.0;
    const auto f = table_function(g, v);
    for (auto p : g.elements()) EXPECT_EQ(q_apply(space, f, p, ExactSum{}).value, brute_q(g, space.K(), space.H(), v, p));
  }
}

TEST(Averaging, RepresentativeIndependenceAndLinearity) {
  const auto g = harness::make_finite_group("S4");
  const auto space = finite_space(g, "klein4", "<(12)>");
  std::mt19937_64 rng(4);
  const auto f = random_table_function(g, rng), h = random_table_function(g, rng);
  const auto qf = make_q_function(space, f, ExactSum{}), qh = make_q_function(space, h, ExactSum{});
  const auto mix = combine(g, 0.75, f, 2.0, h);
  for (auto x : g.elements()) {
    for (auto k : space.K().members()) {
      for (auto hh : space.H().members()) EXPECT_EQ(qf(g.mul(g.mul(k, x), hh)), qf(x));
    }
    EXPECT_EQ(q_apply(space, mix, x, ExactSum{}).value, 0.75 * qf(x) + 2.0 * qh(x));
  }
}

TEST(Averaging, ZeroAndPositivity) {
  const auto g = harness::make_finite_group("D4");
  const auto space = finite_space(g, "<s>", "<r2>");
  const auto zero = table_function(g, std::vector<double>(8, 0.0));
  std::mt19937_64 rng(2);
  const auto pos = random_table_function(g, rng);
  for (auto x : g.elements()) {
    EXPECT_EQ(q_apply(space, zero, x, ExactSum{}).value, 0.0);
    EXPECT_GT(q_apply(space, pos, x, ExactSum{}).value, 0.0);
  }
}

TEST(Averaging, SectionLiftRecoversCosetFunction) {
  const auto g = harness::make_finite_group("S4");
  const auto space = finite_space(g, "klein4", "<(12)>");
  const auto dominating = table_function(g, std::vector<double>(24, 1.0));
  const auto F = CosetFunction<FiniteGroup>::exact(space, [](FiniteElement p) { return 1.0 + p.index; });
  const auto f1 = section_lift(space, F, dominating, ExactSum{});
  std::vector<FiniteElement> reps;
  for (const auto& c : enumerate_classes(space)) reps.push_back(c.representative);
  EXPECT_LT(verify_lift(space, f1, F, reps, ExactSum{}).value, 1e-12);
}

TEST(Averaging, SectionLiftNeedsCoverage) {
  const auto g = harness::make_finite_group("S3");
  const auto space = finite_space(g, "<(12)>", "<(12)>");
  std::vector<double> v(6, 0.0);
  v[g.identity().index] = 1.0;
  const auto d = table_function(g, v);
  const auto one = CosetFunction<FiniteGroup>::exact(space, [](FiniteElement) { return 1.0; });
  const auto f1 = section_lift(space, one, d, ExactSum{});
  EXPECT_EQ(q_apply(space, f1, g.identity(), ExactSum{}).value, 1.0);
  EXPECT_EQ(q_apply(space, f1, g.parse("(123)"), ExactSum{}).value, 0.0);
}

TEST(Averaging, IntertwiningWithNAction) {
  const auto g = harness::make_finite_group("S4");
  const auto space = finite_space(g, "klein4", "<(12)>");
  std::mt19937_64 rng(8);
  const auto f = random_table_function(g, rng);
  const auto els = g.elements();
  for (auto n : space.N().members()) EXPECT_EQ(check_intertwining(space, n, f, els, ExactSum{}).value, 0.0);
}

TEST(Averaging, HeisenbergProductBumpClosedForm) {
  harness::ScenarioConfig c;
  c.group = "heisenberg";
  c.K = "center";
  c.H = "x-axis";
  c.scheme = "tensor";
  c.cover_region = "-1,1;-1,1;-1,1";
  const auto kit = harness::make_heisenberg_kit(c);
  const auto& space = *kit->space;
  const auto& g = space.group();
  // k^-1 (0,y,0) h = (t, y, -c), so Q(f)(y) = bump(y/w) * (w int bump)^2.
  const double w = 0.6;
  const auto f = box_bump(g, Point<3>{{0, 0, 0}}, {w, w, w});
  const double one_axis = std::sqrt(std::numbers::pi) * std::tgamma(9.0) / std::tgamma(9.5);
  for (double y : {-0.5, 0.0, 0.3}) {
    const auto r = q_apply(space, f, Point<3>{{0, y, 0}}, TensorQuadrature{64});
    const double exact = poly_bump(y / w) * (w * one_axis) * (w * one_axis);
    EXPECT_NEAR(r.value, exact, std::max(5 * r.error, 1e-13));
    EXPECT_LT(r.error, 1e-6);
  }
}

TEST(Averaging, IteratedOrdersAgree) {
  harness::ScenarioConfig c;
  c.group = "heisenberg";
  c.K = "center";
  c.H = "x-axis";
  c.scheme = "tensor";
  c.cover_region = "-1,1;-1,1;-1,1";
  const auto kit = harness::make_heisenberg_kit(c);
  const auto& space = *kit->space;
  const auto f = box_bump(space.group(), Point<3>{{0.2, 0.1, -0.3}}, {0.5, 0.5, 0.5});
  const Point<3> p{{0.4, 0.25, 0.1}};
  const auto a = q_apply_iterated(space, f, p, TensorQuadrature{64}, true);
  const auto b = q_apply_iterated(space, f, p, TensorQuadrature{64}, false);
  const auto both = q_apply(space, f, p, TensorQuadrature{64});
  EXPECT_LE(std::abs(a.value - b.value), 5 * (a.error + b.error) + 1e-14);
  EXPECT_LE(std::abs(a.value - both.value), 5 * (a.error + both.error) + 1e-14);
}

}  // namespace

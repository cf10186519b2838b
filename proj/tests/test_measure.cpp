#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dcoset/harness/catalog.hpp"
#include "dcoset/measure.hpp"

namespace {

using namespace dcoset;

struct Finite {
  std::unique_ptr<harness::ScenarioKit<FiniteGroup>> kit;
  const DoubleCosetSpace<FiniteGroup>& space() const { return *kit->space; }
  const FiniteGroup& g() const { return *kit->group; }
};

Finite finite(const char* G, const char* K, const char* H) {
  harness::ScenarioConfig c;
  c.group = G;
  c.K = K;
  c.H = H;
  return {harness::make_finite_kit(c)};
}

MeasureFunctional<FiniteGroup> measure_of(const Finite& s, const RhoFunction<FiniteGroup>& rho) {
  return MeasureFunctional<FiniteGroup>(s.space(), rho, s.kit->dominating, ExactSum{});
}

TEST(Measure, WeilIdentityAgainstRawSums) {
  const auto s = finite("S4", "klein4", "<(12)>");
  const auto rho = s.kit->measure_rho();
  const auto mu = measure_of(s, rho);
  for (const auto& f : s.kit->tests) {
    double direct = 0.0;
    for (auto x : s.g().elements()) direct += f(x) * rho(x);
    EXPECT_NEAR(mu.pair(make_q_function(s.space(), f, ExactSum{})).value, direct, 1e-12);
    EXPECT_LT(check_weil(mu, f).value, 1e-12);
  }
}

TEST(Measure, ClassWeightsMatchIndicatorPairings) {
  const auto s = finite("D4", "<s>", "<r2>");
  const auto rho = s.kit->measure_rho();
  const auto mu = measure_of(s, rho);
  for (const auto& [rep, w] : class_weights(s.space(), rho)) {
    EXPECT_NEAR(mu.pair(class_indicator(s.space(), rep)).value, w, 1e-12);
  }
}

TEST(Measure, LiftPropertyIsExactOnFiniteGroups) {
  const auto s = finite("S3", "<(12)>", "<(12)>");
  const auto mu = measure_of(s, s.kit->measure_rho());
  const auto mut = lift(mu);
  for (auto k : s.space().K().members()) {
    for (auto h : s.space().H().members()) {
      for (const auto& f : s.kit->tests) EXPECT_LT(check_lift_property(mut, k, h, f).value, 1e-12);
    }
  }
}

TEST(Measure, CocycleAndQuasiInvariance) {
  const auto s = finite("S4", "klein4", "<(12)>");
  const auto mu = measure_of(s, s.kit->measure_rho());
  const auto lambda = lambda_from_rho(s.space(), mu.rho());
  const auto F = make_q_function(s.space(), s.kit->tests[0], ExactSum{});
  for (auto n1 : s.space().N().members()) {
    EXPECT_NEAR(lambda(s.g().identity(), n1), 1.0, 1e-15);
    EXPECT_LT(check_quasi_invariance(mu, lambda, n1, F).value, 1e-12);
    for (auto n2 : s.space().N().members()) {
      for (auto p : s.g().elements()) EXPECT_LT(check_cocycle(lambda, n1, n2, p), 1e-12);
    }
  }
}

TEST(Measure, RoundTripRecoversRhoUpToAConstant) {
  const auto s = finite("S4", "klein4", "<(12)>");
  const auto mu = measure_of(s, s.kit->measure_rho());
  const auto lambda = lambda_from_rho(s.space(), mu.rho());
  double c = 0.0;
  const auto back = rho_from_lambda(mu, lambda, s.kit->reference, s.space().H().members(), &c);
  EXPECT_GT(c, 0.0);
  EXPECT_LT(ratio_spread(back, mu.rho(), s.space().N().members()), 1e-12);
}

TEST(Measure, RoundTripNeedsOpenNormalizerInsideH) {
  const auto s = finite("S3", "<(12)>", "e");
  const auto mu = measure_of(s, s.kit->measure_rho());
  const auto lambda = lambda_from_rho(s.space(), mu.rho());
  EXPECT_THROW(rho_from_lambda(mu, lambda, s.kit->reference, {s.g().parse("(123)")}), PreconditionError);
}

TEST(Measure, EquivalentMeasuresShareNullClasses) {
  const auto s = finite("S4", "klein4", "<(12)>");
  std::mt19937_64 rng(21);
  const auto rho1 = rho_from_f(s.space(), random_table_function(s.g(), rng), ExactSum{});
  const auto rho2 = rho_from_f(s.space(), random_table_function(s.g(), rng), ExactSum{});
  const auto mu1 = measure_of(s, rho1), mu2 = measure_of(s, rho2);
  EXPECT_EQ(null_classes(mu1), null_classes(mu2));
  const auto phi = equivalence_density(s.space(), rho1, rho2);
  const auto w1 = class_weights(s.space(), rho1), w2 = class_weights(s.space(), rho2);
  for (const auto& [rep, a] : w1) EXPECT_NEAR(a / w2.at(rep), phi(rep), 1e-12);
  for (const auto& cl : enumerate_classes(s.space())) {
    EXPECT_LT(check_equivalence(mu1, mu2, phi, class_indicator(s.space(), cl.representative)).value, 1e-12);
  }
}

TEST(Measure, ZeroedClassBreaksSupport) {
  const auto s = finite("S3", "<(12)>", "<(12)>");
  const auto rho = s.kit->measure_rho();
  const auto basis = s.kit->basis();
  EXPECT_TRUE(check_support(measure_of(s, rho), basis));
  const auto zeroed = zero_class(s.space(), rho, s.g().parse("(123)"));
  double lo = 1.0;
  EXPECT_FALSE(check_support(measure_of(s, zeroed), basis, &lo));
  EXPECT_EQ(lo, 0.0);
  EXPECT_EQ(null_classes(measure_of(s, zeroed)).size(), 1u);
}

TEST(Measure, TranslatedLiftIdentityUsesInverseTranslate) {
  const auto s = finite("S4", "klein4", "<(12)>");
  const auto mu = measure_of(s, s.kit->measure_rho());
  const auto mut = lift(mu);
  const auto lambda = lambda_from_rho(s.space(), mu.rho());
  double literal = 0.0;
  for (auto n : s.space().N().members()) {
    for (auto h : s.space().H().members()) {
      for (const auto& f : s.kit->tests) {
        EXPECT_LT(check_translated_lift(mut, lambda, n, h, f).value, 1e-12);
        literal = std::max(literal, check_translated_lift_literal(mut, lambda, n, h, f).value);
      }
    }
  }
  // lambda(n, .) in place of lambda(n^-1, .) is not an identity here.
  EXPECT_GT(literal, 1e-3);
}

TEST(Measure, AnalyticRhoOnHeisenbergSatisfiesWeil) {
  harness::ScenarioConfig c;
  c.group = "heisenberg";
  c.K = "center";
  c.H = "x-axis";
  c.scheme = "tensor";
  c.points = 32;
  c.cover_region = "-1,1;-1,1;-1,1";
  const auto kit = harness::make_heisenberg_kit(c);
  const MeasureFunctional<HeisenbergGroup> mu(*kit->space, kit->measure_rho(), kit->dominating, kit->scheme);
  const auto r = check_weil(mu, kit->tests[0]);
  EXPECT_LE(r.value, 5 * r.error + 1e-12);
  EXPECT_LT(r.error, 1e-3);
}

}  // namespace

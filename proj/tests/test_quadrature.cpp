#include <cmath>
#include <numbers>
#include <span>

#include <gtest/gtest.h>

#include "dcoset/quadrature.hpp"
#include "dcoset/test_function.hpp"

namespace {

using namespace dcoset;

// int_{-1}^{1} (1 - t^2)^8 dt = sqrt(pi) Gamma(9) / Gamma(19/2).
const double kBumpIntegral = std::sqrt(std::numbers::pi) * std::tgamma(9.0) / std::tgamma(9.5);

TEST(Quadrature, TensorIntegratesSmoothBumpToReportedError) {
  const Box box{{-1.0, 1.0}};
  const auto r = integrate_box(box, TensorQuadrature{64}, [](std::span<const double> t) { return poly_bump(t[0]); });
  EXPECT_NEAR(r.value, kBumpIntegral, 5 * r.error + 1e-14);
  EXPECT_LT(r.error, 1e-6);
}

TEST(Quadrature, SupportTighteningFindsAnOffCentreBump) {
  const Box box{{-10.0, 10.0}};
  const auto r = integrate_box(box, TensorQuadrature{64}, [](std::span<const double> t) { return poly_bump((t[0] - 3.0) / 0.5); });
  EXPECT_NEAR(r.value, 0.5 * kBumpIntegral, 5 * r.error + 1e-14);
}

TEST(Quadrature, ProductBumpInTwoDimensions) {
  const Box box{{-1.0, 1.0}, {0.0, 2.0}};
  auto f = [](std::span<const double> t) { return poly_bump(t[0]) * poly_bump(t[1] - 1.0); };
  const auto r = integrate_box(box, TensorQuadrature{64}, f);
  EXPECT_NEAR(r.value, kBumpIntegral * kBumpIntegral, 5 * r.error + 1e-14);
  EXPECT_LT(r.error, 1e-6);
}

TEST(Quadrature, PeriodicAxisIsSpectrallyAccurate) {
  const Box box{{-std::numbers::pi, std::numbers::pi, true}};
  const auto r = integrate_box(box, TensorQuadrature{32}, [](std::span<const double> t) { return std::exp(std::cos(t[0])); });
  // 2 pi I_0(1)
  EXPECT_NEAR(r.value, 2.0 * std::numbers::pi * std::cyl_bessel_i(0.0, 1.0), 1e-12);
}

TEST(Quadrature, ZeroFunctionIsExactlyZero) {
  const auto r = integrate_box(Box{{0.0, 1.0}, {0.0, 1.0}}, TensorQuadrature{16}, [](std::span<const double>) { return 0.0; });
  EXPECT_EQ(r.value, 0.0);
}

TEST(Quadrature, MonteCarloIsReproducibleAndWithinError) {
  const Box box{{-1.0, 1.0}};
  auto f = [](std::span<const double> t) { return poly_bump(t[0]); };
  const MonteCarlo mc{200000, 42, 0};
  const auto a = integrate_box(box, mc, f);
  const auto b = integrate_box(box, mc, f);
  EXPECT_EQ(a.value, b.value);
  EXPECT_NEAR(a.value, kBumpIntegral, a.error);
  const auto c = integrate_box(box, with_stream(mc, 1), f);
  EXPECT_NE(a.value, c.value);
}

TEST(Quadrature, SupportEscapingTheBoxIsRejected) {
  const Box box{{0.0, 1.0}};
  EXPECT_THROW(integrate_box(box, TensorQuadrature{32}, [](std::span<const double>) { return 1.0; }),
               IntegrationDomainError);
}

TEST(Quadrature, TooFewPointsIsAConfigurationError) {
  EXPECT_THROW(integrate_box(Box{{0.0, 1.0}}, TensorQuadrature{1}, [](std::span<const double>) { return 0.0; }),
               ConfigurationError);
}

TEST(Quadrature, ExactSumHasNoBoxRule) {
  EXPECT_THROW(integrate_box(Box{{0.0, 1.0}}, ExactSum{}, [](std::span<const double>) { return 0.0; }), ConfigurationError);
}

}  // namespace

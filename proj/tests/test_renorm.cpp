#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qgeo/renorm/renormalized_area.hpp"

using namespace qgeo;

namespace {

constexpr double pi = std::numbers::pi;

// Area of {z > eps} on the k = 4 hemisphere from the antiderivative of
// |S^3| (1 - u^2) u^{-4}, u = z / R.
double area4(double eps, double R) {
  const double a = eps / R;
  return 2 * pi * pi * (std::pow(a, -3) / 3 - 1 / a + 2.0 / 3);
}

}  // namespace

TEST(Renorm, HemisphereModelIsTotallyGeodesic) {
  for (auto [k, n] : {std::pair{2, 3}, {2, 4}, {4, 5}, {4, 6}}) {
    const auto m = hemisphere_model(k, n, 1.5);
    for (const auto& y : interior_points(m)) {
      const auto p = Scene{"hemisphere", m.g, m.graph, y, {}}.pack<double>();
      EXPECT_LT(max_abs(at(p.H)), 1e-9);
      EXPECT_LT(max_abs(at(p.Lo)), 1e-9);
      EXPECT_LT(max_abs(at(p.weyl)), 1e-9);
    }
  }
  EXPECT_THROW(hemisphere_model(3, 5), DomainError);
  EXPECT_THROW(hemisphere_model(4, 4), ConfigError);
  EXPECT_THROW(hemisphere_model(2, 3, 0.0), ConfigError);
}

TEST(Renorm, ChartsAgreeOnAreaDensity) {
  // z = R e^tau on the log-height chart against the graph chart at the same point.
  const auto m = hemisphere_model(2, 3, 1.0);
  const double tau = -0.7, phi = 0.4, rho = std::sqrt(1 - std::exp(2 * tau));
  const double d_chart = induced_area_density(m.g, m.chart, {tau, phi});
  const double d_graph = induced_area_density(m.g, m.graph, {rho * std::cos(phi), rho * std::sin(phi)});
  // d(area) = d_graph rho drho dphi and drho/dtau = -e^{2 tau} / rho.
  EXPECT_NEAR(d_chart, d_graph * std::exp(2 * tau), 1e-12);
  EXPECT_NEAR(d_graph, 1.0 / std::pow(std::exp(tau), 3), 1e-12);
}

TEST(Renorm, TruncatedAreaK2) {
  const auto m = hemisphere_model(2, 3, 1.0);
  EXPECT_NEAR(truncated_area(m, 0.5), 2 * pi, 1e-12);
  for (double eps : {1e-3, 1e-2, 0.3})
    EXPECT_NEAR(truncated_area(m, eps), 2 * pi * (1 / eps - 1), 1e-13 * (1 / eps)) << eps;
  EXPECT_LT(truncated_area(m, 1 - 1e-6), 1e-4);
  EXPECT_THROW(truncated_area(m, 1.0), DomainError);
  EXPECT_THROW(truncated_area(m, 2.0), DomainError);
  EXPECT_THROW(truncated_area(m, 0.0), UsageError);
}

TEST(Renorm, TruncatedAreaK4) {
  const auto m = hemisphere_model(4, 5, 1.0);
  TruncationOptions fine;
  fine.panel = 0.25;
  fine.nodes = 20;
  for (double eps : {1e-3, 0.05, 0.5}) {
    const double a = truncated_area(m, eps), ref = truncated_area(m, eps, fine);
    EXPECT_LT(std::abs(a - ref), 1e-7 * (1 + ref)) << eps;
    EXPECT_NEAR(a, area4(eps, 1.0), 1e-12 * area4(eps, 1.0)) << eps;
  }
  EXPECT_NEAR(truncated_area(hemisphere_model(4, 5, 2.0), 0.02), area4(0.02, 2.0), 1e-12 * area4(0.02, 2.0));
}

TEST(Renorm, FitRecoversRenormalizedArea) {
  const auto f2 = fit_renormalized_area(hemisphere_model(2, 3, 1.0));
  EXPECT_EQ(f2.powers, (std::vector<int>{-1, 0}));
  EXPECT_EQ(f2.eps.size(), 12u);
  EXPECT_NEAR(f2.renormalized_area, -2 * pi, 1e-6);
  EXPECT_NEAR(f2.coefficient(-1), 2 * pi, 1e-8);
  EXPECT_LT(f2.residual, 1e-8);
  EXPECT_TRUE(f2.warnings.empty());

  const auto f4 = fit_renormalized_area(hemisphere_model(4, 5, 1.0));
  EXPECT_EQ(f4.powers, (std::vector<int>{-3, -1, 0}));
  EXPECT_NEAR(f4.renormalized_area, 4 * pi * pi / 3, 1e-6);
  EXPECT_NEAR(f4.coefficient(-3), 2 * pi * pi / 3, 1e-8);
  EXPECT_NEAR(f4.coefficient(-1), -2 * pi * pi, 1e-6);
  EXPECT_LT(f4.residual, 1e-8);
  EXPECT_THROW(f4.coefficient(-2), UsageError);
}

TEST(Renorm, RadiusIndependence) {
  for (int k : {2, 4}) {
    const double a1 = fit_renormalized_area(hemisphere_model(k, k + 1, 1.0)).renormalized_area;
    const double a2 = fit_renormalized_area(hemisphere_model(k, k + 1, 2.0)).renormalized_area;
    EXPECT_NEAR(a1, a2, 1e-6) << k;
  }
}

TEST(Renorm, FitIsStable) {
  for (int k : {2, 4}) {
    const auto m = hemisphere_model(k, k + 1, 1.0);
    const double full = fit_renormalized_area(m, geometric_samples(1e-3, 1e-1, 12)).renormalized_area;
    const double half = fit_renormalized_area(m, geometric_samples(1e-3, 5e-2, 12)).renormalized_area;
    EXPECT_NEAR(full, half, 1e-6) << k;
  }
}

TEST(Renorm, IllConditionedFitWarns) {
  const auto m = hemisphere_model(4, 5, 1.0);
  const auto f = fit_renormalized_area(m, geometric_samples(1e-3, 1.00001e-3, 4));
  ASSERT_FALSE(f.warnings.empty()) << f.condition;
  EXPECT_NE(f.warnings.front().find("condition number"), std::string::npos);
  EXPECT_THROW(fit_renormalized_area(m, {1e-3, 1e-2}), UsageError);
}

TEST(Renorm, GaussBonnetForRenormalizedArea) {
  EXPECT_NEAR(renormalized_gb_constant(2), -2 * pi, 1e-14);
  EXPECT_NEAR(renormalized_gb_constant(4), 4 * pi * pi / 3, 1e-13);
  const auto r2 = renorm_gb_check(hemisphere_model(2, 3, 1.0));
  EXPECT_LT(r2.residual, 1e-6);
  EXPECT_LT(r2.max_integrand, 1e-8);
  for (int n : {5, 6}) {
    const auto r4 = renorm_gb_check(hemisphere_model(4, n, 1.0));
    EXPECT_LT(r4.residual, 1e-5) << n;
    EXPECT_LT(r4.max_integrand, 1e-8) << n;
    EXPECT_LT(r4.max_mean_curvature, 1e-9) << n;
  }
  auto m = hemisphere_model(2, 3);
  m.totally_geodesic = false;
  EXPECT_THROW(renorm_gb_check(m), UsageError);
}

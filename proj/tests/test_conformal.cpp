#include <gtest/gtest.h>

#include <random>

#include "qgeo/ambient/catalog.hpp"
#include "qgeo/conformal/independence.hpp"
#include "qgeo/conformal/verifier.hpp"

using namespace qgeo;

namespace {

struct GraphScene {
  Scene scene;
  std::vector<Polynomial> heights;
};

GraphScene random_scene(int k, int n, std::uint64_t seed, bool ddweyl = false) {
  std::mt19937_64 rng(seed);
  std::vector<Polynomial> u;
  for (int b = k; b < n; ++b) u.push_back(qgeo::random_polynomial(rng, k, 5, 2, 4, 0.4));
  std::uniform_real_distribution<double> U(-0.2, 0.2);
  std::vector<double> y(k);
  for (auto& v : y) v = U(rng);
  PackOptions opt;
  opt.ddweyl = ddweyl;
  return {Scene{"random", metrics::random_polynomial(n, seed + 1), patches::graph(k, n, u), y, opt}, u};
}

void expect_linearizations(const std::vector<LinearizationReport>& rs, double tol, const std::string& ctx) {
  for (const auto& r : rs) {
    ASSERT_TRUE(r.analytic.has_value()) << r.name;
    EXPECT_LT(r.residual, tol) << ctx << " " << r.name;
    if (r.central) {
      EXPECT_LT(r.method_gap, 1e-6) << ctx << " " << r.name;
    }
    EXPECT_FALSE(r.inconsistent) << ctx << " " << r.name;
  }
}

}  // namespace

TEST(Conformal, RescaleMatchesPointwiseFactor) {
  auto g = metrics::random_polynomial(5, 11);
  auto u = factors::random(5, 12);
  const std::vector<double> x{0.1, -0.2, 0.05, 0.3, 0.0};
  const double e = std::exp(2 * 0.4 * u(x));
  auto m0 = g.jet(x, 0), m1 = rescale(g, u.field, 0.4).jet(x, 0);
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b) EXPECT_NEAR(m1(a, b).value(), e * m0(a, b).value(), 1e-13);
  auto id = rescale(g, u.field, 0.0).jet(x, 2);
  auto g2 = g.jet(x, 2);
  for (int m = 0; m < g2(1, 2).size(); ++m) EXPECT_NEAR(id(1, 2)[m], g2(1, 2)[m], 1e-14);
}

TEST(Conformal, SphereChartIsConformallyFlat) {
  // 4 / (1 + |x|^2)^2 times the flat metric is the round sphere chart.
  ScalarField u{4,
                [](const JetVec& x) {
                  JetD r(1.0);
                  for (const auto& c : x) r = r + c * c;
                  return log(reciprocal(r) * 2.0);
                },
                "sphere-factor"};
  const std::vector<double> x{0.3, -0.1, 0.2, 0.4};
  auto a = rescale(metrics::flat(4), u, 1.0).jet(x, 3);
  auto b = metrics::sphere(4).jet(x, 3);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const JetD d = a(i, j) - b(i, j);
      for (int m = 0; m < d.size(); ++m) EXPECT_NEAR(d[m], 0.0, 1e-12) << i << j << " " << m;
    }
}

TEST(Conformal, VanishingFactorConstraint) {
  auto gs = random_scene(4, 6, 20);
  for (int m = 1; m <= 3; ++m) {
    auto u = factors::vanishing_on_graph(4, 6, gs.heights, m, 21);
    EXPECT_NO_THROW(u.verify_constraint(gs.scene.x()));
    ConformalFactor weak = u;
    weak.vanishing_order = m + 1;
    EXPECT_THROW(weak.verify_constraint(gs.scene.x()), ConfigError);
  }
}

TEST(Conformal, BasicTransformationRules) {
  for (auto [k, n] : {std::pair{4, 6}, {3, 5}, {2, 4}, {2, 3}}) {
    auto gs = random_scene(k, n, 100 + 10 * k + n);
    auto u = factors::random(n, 200 + k);
    for (double w : {0.0, 1.5, -1.0}) {
      auto rs = check_basic_linearizations(gs.scene, u, w);
      ASSERT_EQ(rs.size(), 5u);
      expect_linearizations(rs, 1e-6, std::to_string(k) + "," + std::to_string(n));
      // In two dimensions the Laplacian on functions is itself invariant.
      const bool lap_fixed = k == 2 && w == 0.0;
      for (const auto& r : rs)
        if (r.name == "L" || r.name == "H" || (r.name == "Lap" && !lap_fixed)) {
          EXPECT_GT(max_abs(r.numeric), 1e-4) << r.name;
        }
    }
  }
}

TEST(Conformal, TangentialDependence) {
  for (auto [k, n] : {std::pair{4, 6}, {4, 5}, {3, 6}, {5, 7}}) {
    auto gs = random_scene(k, n, 300 + 10 * k + n);
    auto u = factors::random(n, 400 + n);
    auto rs = check_tangential_dependence(gs.scene, u);
    expect_linearizations(rs, 1e-6, std::to_string(k) + "," + std::to_string(n));
    for (const auto& r : rs) EXPECT_GT(max_abs(r.numeric), 1e-5) << r.name;
  }
}

TEST(Conformal, TangentialDependenceNormalOnlyFactor) {
  // U vanishing on the submanifold with a purely normal gradient leaves all
  // five tensors fixed to first order.
  auto gs = random_scene(4, 6, 500);
  auto u = factors::vanishing_on_graph(4, 6, gs.heights, 1, 501);
  for (const auto& r : check_tangential_dependence(gs.scene, u)) EXPECT_LT(max_abs(r.numeric), 1e-9) << r.name;
}

TEST(Conformal, TangentialDependenceFlatWeyl) {
  Scene sc{"flat", metrics::flat(6), patches::random_graph(4, 6, 510), {0.1, 0.05, -0.1, 0.2}, {}};
  auto u = factors::random(6, 511);
  auto rs = check_tangential_dependence(sc, u);
  expect_linearizations(rs, 1e-6, "flat");
  EXPECT_LT(max_abs(rs[1].numeric), 1e-10);
  EXPECT_LT(max_abs(rs[2].numeric), 1e-10);
}

TEST(Conformal, FourDimensionalTable) {
  for (int n : {5, 6, 7}) {
    auto gs = random_scene(4, n, 600 + n);
    auto u = factors::random(n, 700 + n);
    auto rs = check_step_table(gs.scene, u);
    ASSERT_EQ(rs.size(), 7u);
    expect_linearizations(rs, 1e-6, std::to_string(n));
    for (int i = 0; i < 5; ++i) EXPECT_GT(std::abs(rs[i].numeric[0]), 1e-6) << rs[i].name;
  }
  EXPECT_THROW(check_step_table(random_scene(3, 5, 610).scene, factors::random(5, 1)), DomainError);
}

TEST(Conformal, StrataVanishOnConstrainedFactors) {
  const auto& list = strata_scalars();
  ASSERT_EQ(list.size(), 33u);
  auto gs = random_scene(4, 6, 800);
  for (int j = 0; j <= 4; ++j) {
    auto tight = factors::vanishing_on_graph(4, 6, gs.heights, j + 1, 810 + j);
    auto loose = factors::vanishing_on_graph(4, 6, gs.heights, j, 820 + j);
    double worst = 0, witness = 0;
    for (const auto& s : list) {
      if (s.j != j) continue;
      worst = std::max(worst, std::abs(stratum_linearization(s, gs.scene, tight)));
      witness = std::max(witness, std::abs(stratum_linearization(s, gs.scene, loose)));
    }
    EXPECT_LT(worst, 1e-7) << "j = " << j;
    EXPECT_GT(witness, 1e-4) << "j = " << j;
  }
}

TEST(Conformal, RegisteredInvariantsAreInvariant) {
  for (auto [k, n] : {std::pair{4, 6}, {4, 5}, {3, 5}, {2, 4}, {5, 7}}) {
    auto gs = random_scene(k, n, 900 + 10 * k + n, true);
    auto u = factors::random(n, 950 + n);
    for (const auto& info : invariant_registry()) {
      if (!info.conformal || !info.defined_at(k, n)) continue;
      auto r = check_invariance(info, gs.scene, u, {0.1, -0.1});
      EXPECT_LT(r.max_residual(), 1e-6) << info.name << " k=" << k << " n=" << n;
    }
  }
}

TEST(Conformal, NonInvariantsAreDetected) {
  auto gs = random_scene(4, 6, 960);
  auto u = factors::random(6, 961);
  for (const char* name : {"Q", "Pf", "Q4", "Qbar4"}) {
    auto r = check_invariance(find_invariant(name), gs.scene, u);
    EXPECT_GT(r.max_residual(), 1e-5) << name;
  }
}

TEST(Conformal, TensorInvariance) {
  for (auto [k, n] : {std::pair{4, 6}, {3, 5}, {2, 4}}) {
    auto gs = random_scene(k, n, 1000 + k);
    auto u = factors::random(n, 1010 + k);
    expect_linearizations(check_tensor_invariance(gs.scene, u), 1e-6, std::to_string(k));
  }
}

TEST(Conformal, QTransformationLaw) {
  std::vector<Scene> scenes;
  for (int n : {3, 4, 5}) scenes.push_back(random_scene(2, n, 1100 + n).scene);
  for (int n : {5, 6}) scenes.push_back(random_scene(4, n, 1110 + n).scene);
  scenes.push_back({"s2xs2", metrics::sphere(5), patches::s2xs2(), {0.3, 0.7, -0.2, 2.1}, {}});
  for (const auto& sc : scenes)
    for (std::uint64_t s : {1, 2, 3}) {
      auto u = factors::random(sc.n(), 1200 + s, 4, 0.25);
      auto r = check_Q_transformation(sc, u);
      EXPECT_LT(r.residual, 1e-5) << sc.name << " k=" << sc.k() << " n=" << sc.n();
      EXPECT_GT(std::abs(r.pk), 1e-5);
    }
}

TEST(Conformal, ConstantsAreInTheKernel) {
  auto sc4 = random_scene(4, 6, 1300).scene;
  auto sc2 = random_scene(2, 4, 1301).scene;
  auto p4 = sc4.pack<double>();
  auto p2 = sc2.pack<double>();
  EXPECT_NEAR(InvariantEvaluator<double>(p4).P4(JetD(1.0)), 0.0, 1e-12);
  EXPECT_NEAR(InvariantEvaluator<double>(p2).P2(JetD(1.0)), 0.0, 1e-12);
}

TEST(Conformal, PaneitzSignCalibration) {
  std::vector<Scene> scenes{random_scene(4, 6, 1400).scene, random_scene(4, 5, 1401).scene};
  std::vector<ConformalFactor> us{factors::random(6, 1402), factors::random(6, 1403)};
  // Factors live on the ambient chart, so match dimensions per scene.
  auto cal6 = calibrate_paneitz({scenes[0]}, us);
  auto cal5 = calibrate_paneitz({scenes[1]}, {factors::random(5, 1404)});
  EXPECT_EQ(cal6.sign, kPaneitzSign);
  EXPECT_EQ(cal5.sign, kPaneitzSign);
  EXPECT_LT(cal6.residual_plus, 1e-5);
  EXPECT_GT(cal6.residual_minus, 1e-4);
}

TEST(Conformal, Homogeneity) {
  for (auto [k, n] : {std::pair{4, 6}, {3, 5}, {2, 4}}) {
    auto sc = random_scene(k, n, 1500 + k, true).scene;
    for (const auto& info : invariant_registry()) {
      if (!info.defined_at(k, n)) continue;
      for (double c : {2.0, 1.0 / 3.0}) EXPECT_LT(check_homogeneity(info, sc, c), 1e-9) << info.name << " " << c;
    }
  }
}

TEST(Conformal, RegistryDomainsMatchEvaluators) {
  for (int n = 3; n <= 7; ++n)
    for (int k = 1; k < n; ++k) {
      PackOptions opt;
      opt.ddweyl = true;
      Scene sc{"flat", metrics::flat(n), patches::affine(k, n), std::vector<double>(k, 0.1), opt};
      auto p = sc.pack<double>();
      InvariantEvaluator<double> e(p);
      for (const auto& info : invariant_registry()) {
        bool ok = true;
        try {
          (void)info.eval(e);
        } catch (const DomainError&) {
          ok = false;
        }
        EXPECT_EQ(ok, info.defined_at(k, n)) << info.name << " k=" << k << " n=" << n;
      }
    }
}

TEST(Conformal, IndependenceWitness) {
  auto w6 = linear_independence_witness(6, {{1.0, 1.0, 1.0, 1.0}});
  ASSERT_EQ(w6.tensor_names.size(), 4u);
  ASSERT_EQ(w6.scalar_names.size(), 2u);
  EXPECT_GT(w6.tensor_det, 1e-12);
  EXPECT_GT(w6.scalar_det, 1e-12);
  auto w7 = linear_independence_witness(7);
  EXPECT_GT(w7.tensor_det, 1e-12);
  EXPECT_GT(w7.scalar_det, 1e-12);
  auto w5 = linear_independence_witness(5);
  ASSERT_EQ(w5.tensor_names.size(), 3u);
  EXPECT_GT(w5.tensor_det, 1e-12);
  EXPECT_GT(w5.scalar_norms[0], 1e-6);
  EXPECT_NEAR(w5.scalar_det, 1.0, 1e-12);
}

TEST(Conformal, IndependenceWitnessFlatFamily) {
  auto w = linear_independence_witness(6, {{0.0, 0.0, 0.0, 0.0}});
  for (double v : w.tensor_norms) EXPECT_LT(v, 1e-12);
  for (double v : w.scalar_norms) EXPECT_LT(v, 1e-12);
  EXPECT_EQ(w.tensor_det, 0.0);
  EXPECT_EQ(w.scalar_det, 0.0);
  EXPECT_THROW(linear_independence_witness(4), DomainError);
}

TEST(Conformal, IndependenceFamilyScalarsMatchClosedForms) {
  // At the origin, with f_a depending on (s, t, u, v) as in the family,
  // div(Lo W) = -sum_{a != b} (d_b d_A f_a)^2 + (1/(n-2)) sum (d_a d_A f_a)^2 and
  // div(Lo W trace) = -((n-5)/(n-2)) sum (d_a d_A f_a)^2.
  for (int n : {5, 6, 7}) {
    const double s = 0.5, t = -1.0, u = 0.3, v = 2.0;
    auto w = linear_independence_witness(n, {{s, t, u, v}}, {{0.0, 0.0, 0.0, 0.0}});
    // Only d_1 d_5 f_1 = u, d_1 d_5 f_2 = v, d_1 d_5 f_3 = -(u + v) are nonzero
    // among the mixed second derivatives.
    const double off = v * v + (u + v) * (u + v);
    const double diag = u * u;
    EXPECT_NEAR(w.scalar_norms[0], std::abs(-off + diag / (n - 2.0)), 1e-10) << n;
    if (n >= 6) {
      EXPECT_NEAR(w.scalar_norms[1], std::abs((n - 5.0) / (n - 2.0) * diag), 1e-10) << n;
    }
  }
}

TEST(Conformal, ConstantRescaleScalesScalarCurvature) {
  auto g = metrics::random_polynomial(5, 30);
  const std::vector<double> x{0.1, 0.2, -0.1, 0.0, 0.05};
  const double c = 0.7, t = 0.6;
  auto u = factors::constant(5, c);
  auto R0 = curvature_pack<double>(g.jet(x, kMetricOrder)).scal[0].value();
  auto R1 = curvature_pack<double>(rescale(g, u.field, t).jet(x, kMetricOrder)).scal[0].value();
  EXPECT_GT(std::abs(R0), 1e-3);
  EXPECT_NEAR(R1, std::exp(-2 * t * c) * R0, 1e-12);
}

TEST(Conformal, TangentialDependenceFlatSlice) {
  // Flat ambient, totally geodesic slice: C, its trace, B and D stay zero,
  // while mP changes by minus the intrinsic Hessian of U.
  Scene sc{"flat-slice", metrics::flat(6), patches::affine(4, 6), {0.1, -0.2, 0.3, 0.05}, {}};
  auto u = factors::random(6, 520);
  auto rs = check_tangential_dependence(sc, u);
  expect_linearizations(rs, 1e-6, "flat slice");
  for (std::size_t i = 1; i < rs.size(); ++i) EXPECT_LT(max_abs(rs[i].numeric), 1e-12) << rs[i].name;
  EXPECT_GT(max_abs(rs[0].numeric), 1e-3);
}

TEST(Conformal, InvarianceReportSplitsChecks) {
  auto gs = random_scene(4, 6, 970, true);
  auto u = factors::random(6, 971);
  for (const char* name : {"K1", "K2", "I", "J", "2I+J"}) {
    auto r = check_invariance(find_invariant(name), gs.scene, u);
    ASSERT_EQ(r.finite.size(), 2u);
    EXPECT_GT(std::abs(r.value), 1e-6) << name;
    for (auto [t, res] : r.finite) EXPECT_LT(res, 1e-6) << name << " t=" << t;
    EXPECT_LT(r.linearization, 1e-7) << name;
  }
  auto h = random_scene(4, 5, 972, true);
  auto rI = check_invariance(find_invariant("I"), h.scene, factors::random(5, 973));
  EXPECT_LT(rI.max_residual(), 1e-6);
  EXPECT_THROW(check_invariance(find_invariant("I"), random_scene(3, 4, 974).scene, factors::random(4, 1)),
               DomainError);
}

TEST(Conformal, QLawSimpleCases) {
  // Constant factor on a flat scene: both sides vanish.
  Scene plane{"plane", metrics::flat(4), patches::affine(2, 4), {0.1, 0.3}, {}};
  auto r0 = check_Q_transformation(plane, factors::constant(4, 0.8));
  EXPECT_EQ(r0.q, 0.0);
  EXPECT_NEAR(r0.lhs, 0.0, 1e-14);
  // Flat plane, polynomial factor: e^{2U} Q^ = -Lap U.
  Polynomial poly{4, {{0.2, {1, 0, 0, 0}}, {0.5, {2, 0, 0, 0}}, {-0.3, {1, 2, 0, 0}}, {0.4, {0, 1, 1, 0}}}};
  auto u = factors::polynomial(poly);
  auto r1 = check_Q_transformation(plane, u);
  const auto p = plane.pack<double>();
  const double lapU = lap_bar(p, restrict_to_patch(u.field, plane)).value();
  EXPECT_GT(std::abs(lapU), 1e-3);
  EXPECT_NEAR(r1.lhs, -lapU, 1e-10);
  // Equatorial S^4 in S^5 with a bump centred at the base point.
  Scene s4{"equatorial-s4", metrics::sphere(5), patches::equatorial_sphere(4, 5), {0.1, 0.4, 0.3, 0.05}, {}};
  const auto x0 = s4.x();
  ConformalFactor bump{{5,
                        [x0](const JetVec& x) {
                          JetD r(0.0);
                          for (int a = 0; a < 5; ++a) r = r + (x[a] - x0[a]) * (x[a] - x0[a]);
                          return exp(r * -4.0) * 0.5;
                        },
                        "bump"},
                       0,
                       "bump"};
  EXPECT_LT(check_Q_transformation(s4, bump).residual, 1e-5);
}

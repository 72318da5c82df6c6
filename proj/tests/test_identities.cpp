#include <gtest/gtest.h>

#include <random>

#include "qgeo/ambient/catalog.hpp"
#include "qgeo/submanifold/checks.hpp"

using namespace qgeo;
using TD = LabeledTensor<double>;

namespace {

SubmanifoldPack<double> make(const MetricField& g, const Immersion& im, const std::vector<double>& y,
                             PackOptions opt = {}) {
  return build_pack<double>(g.jet(im.point(y), kMetricOrder), im, y, opt);
}

std::vector<double> random_point(int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-0.2, 0.2);
  std::vector<double> y(k);
  for (auto& v : y) v = U(rng);
  return y;
}

void expect_all_below(const ResidualRecord& r, double tol, const std::string& ctx) {
  for (const auto& [name, v] : r) EXPECT_LT(v, tol) << ctx << " " << name;
}

}  // namespace

TEST(Identities, FlatTotallyGeodesicVanishes) {
  auto p = make(metrics::flat(6), patches::affine(4, 6), {0.1, 0.2, 0.3, 0.4});
  auto c = conformal_tensors(p);
  for (const auto& [name, v] : gauss_codazzi_residuals(p, c)) EXPECT_EQ(v, 0.0) << name;
  for (const auto& [name, v] : divergence_identity_residuals(p, c)) EXPECT_EQ(v, 0.0) << name;
  EXPECT_EQ(simons_residual(p, c), 0.0);
  EXPECT_EQ(max_abs(at(*c.F)), 0.0);
  EXPECT_EQ(c.G->value(), 0.0);
  EXPECT_EQ(max_abs(at(c.D)), 0.0);
  EXPECT_EQ(max_abs(at(c.mP)), 0.0);
  EXPECT_EQ(max_abs(at(c.mC)), 0.0);
  EXPECT_EQ(max_abs(at(c.mB)), 0.0);
}

TEST(Identities, GaussCodazziOnRandomScenes) {
  for (int s = 0; s < 10; ++s) {
    const int n = 5 + s % 3;
    auto p = make(metrics::random_polynomial(n, 100 + s), patches::random_graph(4, n, 200 + s), random_point(4, s));
    auto c = conformal_tensors(p);
    auto r = gauss_codazzi_residuals(p, c);
    EXPECT_EQ(r.size(), 7u);
    expect_all_below(r, 1e-7, "scene " + std::to_string(s));
    EXPECT_GT(max_abs(at(p.Lo)), 1e-3);
    EXPECT_GT(max_abs(at(c.D)), 1e-4);
  }
}

TEST(Identities, GaussCodazziSurface) {
  auto p = make(metrics::random_polynomial(5, 7), patches::random_graph(2, 5, 8), {0.1, -0.1});
  auto c = conformal_tensors(p);
  auto r = gauss_codazzi_residuals(p, c);
  EXPECT_EQ(r.count("gcW"), 0u);
  EXPECT_EQ(r.count("gcP"), 0u);
  for (const char* name : {"gcJ", "gcdL", "gcD", "gcnc", "gauss"}) EXPECT_LT(r.at(name), 1e-7) << name;
  EXPECT_THROW(fialkow(c), UsageError);
  expect_all_below(weyl_trace_residuals_k2(p), 1e-9, "k=2 Weyl traces");
}

TEST(Identities, DivergenceIdentities) {
  for (int s = 0; s < 3; ++s) {
    auto p = make(metrics::random_polynomial(6, 300 + s), patches::random_graph(4, 6, 400 + s), random_point(4, 9 + s));
    auto c = conformal_tensors(p);
    expect_all_below(divergence_identity_residuals(p, c), 1e-6, "k=4 n=6");
  }
  auto h = make(metrics::random_polynomial(5, 31), patches::random_graph(4, 5, 32), random_point(4, 33));
  expect_all_below(divergence_identity_residuals(h, conformal_tensors(h)), 1e-6, "hypersurface");
  auto q = make(metrics::random_polynomial(5, 34), patches::random_graph(2, 5, 35), random_point(2, 36));
  expect_all_below(divergence_identity_residuals(q, conformal_tensors(q)), 1e-6, "k=2");
}

TEST(Identities, SimonsType) {
  auto p = make(metrics::random_polynomial(6, 51), patches::random_graph(4, 6, 52), random_point(4, 53));
  EXPECT_LT(simons_residual(p, conformal_tensors(p)), 1e-6);
  auto q = make(metrics::random_polynomial(5, 54), patches::random_graph(3, 5, 55), random_point(3, 56));
  EXPECT_LT(simons_residual(q, conformal_tensors(q)), 1e-6);
  auto s = make(metrics::random_polynomial(5, 57), patches::random_graph(2, 5, 58), random_point(2, 59));
  EXPECT_THROW(simons_residual(s, conformal_tensors(s)), UsageError);
}

TEST(Identities, ProjectedDerivativeRoutesAgree) {
  auto p = make(metrics::random_polynomial(6, 61), patches::random_graph(4, 6, 62), random_point(4, 63));
  // Frame-derivative route on the split tensor vs ambient derivative plus L terms.
  TD a = at(cov_bar(p, blk(p.weyl, "ttnt", 4)));
  TD b = blk(at(cov_bar_from_ambient(p, p.weyl, p.dweyl)), "tttnt", 4);
  EXPECT_GT(max_abs(a), 1e-3);
  EXPECT_LT(max_abs(a - b), 1e-10);
  TD c = at(cov_bar(p, blk(p.schouten, "tn", 4)));
  TD d = blk(at(cov_bar_from_ambient(p, p.schouten, p.dschouten)), "ttn", 4);
  EXPECT_LT(max_abs(c - d), 1e-10);
  // Explicit second fundamental form terms for P restricted to (t, t).
  TD L = at(p.L), P = at(p.schouten);
  TD e = blk(at(p.dschouten), "ttt", 4) + einsum("ibA,Ac->ibc", L, blk(P, "nt", 4)) +
         einsum("icA,bA->ibc", L, blk(P, "tn", 4));
  EXPECT_LT(max_abs(at(cov_bar(p, blk(p.schouten, "tt", 4))) - e), 1e-10);
}

TEST(Identities, NormalCurvatureOfCodimensionOne) {
  auto p = make(metrics::random_polynomial(5, 71), patches::random_graph(4, 5, 72), random_point(4, 73));
  EXPECT_LT(max_abs(at(normal_curvature(p))), 1e-12);
}

TEST(Identities, CatalogValues) {
  auto t = make(metrics::sphere(3), patches::clifford_torus(), {0.4, -1.2});
  auto ct = conformal_tensors(t);
  EXPECT_NEAR(ct.G->value(), 1.0, 1e-12);
  EXPECT_NEAR(pfaffian_bar(t).value(), 0.0, 1e-12);
  auto s = make(metrics::sphere(5), patches::equatorial_sphere(4, 5), {0.2, 0.1, -0.3, 0.4});
  EXPECT_NEAR(pfaffian_bar(s).value(), 3.0, 1e-10);
  auto cs = conformal_tensors(s);
  // Unit sphere: P = g/2, so mP = h/2 on a totally geodesic slice.
  TD mP = at(cs.mP);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(mP(i, j), i == j ? 0.5 : 0.0, 1e-11);
  auto k3 = make(metrics::flat(5), patches::random_graph(3, 5, 3), {0, 0, 0});
  EXPECT_THROW(pfaffian_bar(k3), UsageError);
}

TEST(Identities, ConformalCirclesHaveVanishingD) {
  auto flat = metrics::flat(3);
  for (double r : {0.5, 2.0}) {
    auto p = make(flat, patches::circle(r), {0.7});
    auto c = conformal_tensors(p);
    EXPECT_LT(max_abs(at(c.D)), 1e-12);
    EXPECT_NEAR(std::sqrt(c.H_sq.value()), 1.0 / r, 1e-12);
  }
  auto l = conformal_tensors(make(flat, patches::line(), {0.3}));
  EXPECT_LT(max_abs(at(l.D)), 1e-14);
  auto e = conformal_tensors(make(flat, patches::ellipse(2.0, 1.0), {0.4}));
  EXPECT_GT(max_abs(at(e.D)), 1e-2);
}

TEST(Identities, ScalarsIndependentOfSeedRotation) {
  auto g = metrics::random_polynomial(6, 81);
  auto im = patches::random_graph(4, 6, 82);
  auto y = random_point(4, 83);
  auto p = make(g, im, y);
  PackOptions opt;
  // A fixed rotation in the (0, 5) and (2, 4) coordinate planes.
  opt.seed_rotation.assign(36, 0.0);
  for (int a = 0; a < 6; ++a) opt.seed_rotation[a * 6 + a] = 1.0;
  const double c1 = std::cos(0.7), s1 = std::sin(0.7), c2 = std::cos(-1.3), s2 = std::sin(-1.3);
  opt.seed_rotation[0] = c1, opt.seed_rotation[5] = s1, opt.seed_rotation[30] = -s1, opt.seed_rotation[35] = c1;
  opt.seed_rotation[14] = c2, opt.seed_rotation[16] = s2, opt.seed_rotation[26] = -s2, opt.seed_rotation[28] = c2;
  auto q = make(g, im, y, opt);
  auto cp = conformal_tensors(p), cq = conformal_tensors(q);
  EXPECT_NEAR(cp.G->value(), cq.G->value(), 1e-9);
  auto sq = [](const TD& t) {
    double s = 0;
    for (double v : t.data()) s += v * v;
    return s;
  };
  EXPECT_NEAR(sq(at(cp.D)), sq(at(cq.D)), 1e-9);
  EXPECT_NEAR(sq(at(cp.mB)), sq(at(cq.mB)), 1e-9);
  EXPECT_NEAR(sq(at(cp.R_perp)), sq(at(cq.R_perp)), 1e-9);
  EXPECT_NEAR(simons_residual(p, cp), simons_residual(q, cq), 1e-9);
}

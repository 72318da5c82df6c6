#include <gtest/gtest.h>

#include <numbers>

#include "qgeo/ambient/catalog.hpp"
#include "qgeo/submanifold/pack.hpp"

using namespace qgeo;
using TD = LabeledTensor<double>;

namespace {

SubmanifoldPack<double> make(const MetricField& g, const Immersion& im, const std::vector<double>& y,
                             PackOptions opt = {}) {
  auto x = im.point(y);
  return build_pack<double>(g.jet(x, kMetricOrder), im, y, opt);
}

double norm2(const TD& t) {
  double s = 0;
  for (double v : t.data()) s += v * v;
  return s;
}

}  // namespace

TEST(Submanifold, AffinePlaneInFlatSpace) {
  auto p = make(metrics::flat(5), patches::affine(3, 5), {0.1, 0.2, 0.3});
  auto F = at(p.frame);
  for (int I = 0; I < 5; ++I)
    for (int a = 0; a < 5; ++a) EXPECT_NEAR(F(I, a), I == a ? 1.0 : 0.0, 1e-15);
  EXPECT_EQ(max_abs(at(p.L)), 0.0);
  EXPECT_EQ(max_abs(at(p.intr.g) - [] {
              TD d({tan_slot(3), tan_slot(3)});
              for (int i = 0; i < 3; ++i) d(i, i) = 1;
              return d;
            }()),
            0.0);
}

TEST(Submanifold, CliffordTorus) {
  auto p = make(metrics::sphere(3), patches::clifford_torus(), {0.3, 1.1});
  auto h = at(p.intr.g);
  EXPECT_NEAR(h(0, 0), 0.5, 1e-13);
  EXPECT_NEAR(h(1, 1), 0.5, 1e-13);
  EXPECT_NEAR(h(0, 1), 0.0, 1e-13);
  EXPECT_LT(max_abs(at(p.H)), 1e-13);
  EXPECT_NEAR(norm2(at(p.Lo)), 2.0, 1e-12);
  EXPECT_LT(max_abs(at(p.rm_bar)), 1e-12);
}

TEST(Submanifold, EquatorialSpheresAreTotallyGeodesic) {
  auto p = make(metrics::sphere(5), patches::equatorial_sphere(4, 5), {0.2, 0.3, 0.4, 0.5});
  EXPECT_LT(max_abs(at(p.L)), 1e-12);
  EXPECT_NEAR(at(p.j_bar)[0], 2.0, 1e-11);
  auto q = make(metrics::sphere(3), patches::equatorial_sphere(2, 3), {-0.4, 2.0});
  EXPECT_LT(max_abs(at(q.L)), 1e-12);
}

TEST(Submanifold, CylinderMeanCurvature) {
  auto p = make(metrics::flat(5), patches::cylinder(5), {0.1, 0.3, 0.7, 1.9});
  auto H = at(p.H);
  EXPECT_NEAR(std::sqrt(norm2(H)), 0.75, 1e-13);
  // Finite-difference oracle: radial acceleration of unit-speed great circles has length 1,
  // and k H = -(position on S^3) here; check direction with the frame.
  auto F = at(p.frame);
  auto x = p.x0;
  std::vector<double> hv(5, 0.0);
  for (int A = 0; A < 1; ++A)
    for (int a = 0; a < 5; ++a) hv[a] += H(A) * F(4 + A, a);
  for (int a = 1; a < 5; ++a) EXPECT_NEAR(hv[a], -0.75 * x[a], 1e-12);
}

TEST(Submanifold, ConnectionIsMetricAndTorsionFree) {
  auto g = metrics::random_polynomial(6, 42);
  auto p = make(g, patches::random_graph(4, 6, 7), {0.1, -0.2, 0.15, 0.05});
  auto om = at(p.omega);
  EXPECT_LT(max_abs(om + einsum("iIJ->iJI", om)), 1e-13);
  auto L = at(p.L);
  EXPECT_LT(max_abs(L - einsum("ijA->jiA", L)), 1e-12);
  // Metric compatibility of the induced connection: nabla-bar of the identity vanishes.
  TD id({tan_slot(4), tan_slot(4)});
  JT<double> idj({tan_slot(4), tan_slot(4)});
  for (int i = 0; i < 4; ++i) idj(i, i) = JetD(1.0);
  EXPECT_LT(max_abs(at(cov_bar(p, idj))), 1e-13);
}

TEST(Submanifold, InducedConnectionCurvatureMatchesIntrinsicRiemann) {
  auto g = metrics::random_polynomial(6, 5);
  auto p = make(g, patches::random_graph(4, 6, 9), {0.05, 0.1, -0.1, 0.2});
  // Commutator of nabla-bar on the dual frame covectors reproduces R-bar.
  const int k = 4;
  TD Rc({tan_slot(k), tan_slot(k), tan_slot(k), tan_slot(k)});
  for (int m = 0; m < k; ++m) {
    JT<double> tau({tan_slot(k)});
    tau(m) = JetD(1.0);
    auto dd = at(cov_bar(p, cov_bar(p, tau)));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) Rc(a, b, c, m) = dd(a, b, c) - dd(b, a, c);
  }
  auto Rbar = at(p.rm_bar);
  EXPECT_GT(max_abs(Rbar), 1e-3);
  EXPECT_LT(max_abs(Rc - Rbar), 1e-11);
}

TEST(Submanifold, ScalarsIndependentOfFrameSeedsAndChart) {
  auto g = metrics::random_polynomial(7, 77);
  auto im = patches::random_graph(4, 7, 78);
  const std::vector<double> y = {0.1, 0.2, -0.1, 0.05};
  auto p = make(g, im, y);
  // Random orthogonal seed basis via Gram-Schmidt of a random matrix.
  std::mt19937_64 rng(3);
  std::normal_distribution<double> N;
  const int n = 7;
  std::vector<double> Q(n * n);
  for (auto& q : Q) q = N(rng);
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < r; ++s) {
      double d = 0;
      for (int a = 0; a < n; ++a) d += Q[r * n + a] * Q[s * n + a];
      for (int a = 0; a < n; ++a) Q[r * n + a] -= d * Q[s * n + a];
    }
    double nn = 0;
    for (int a = 0; a < n; ++a) nn += Q[r * n + a] * Q[r * n + a];
    for (int a = 0; a < n; ++a) Q[r * n + a] /= std::sqrt(nn);
  }
  PackOptions opt;
  opt.seed_rotation = Q;
  auto q = make(g, im, y, opt);
  EXPECT_NEAR(norm2(at(p.Lo)), norm2(at(q.Lo)), 1e-12);
  EXPECT_NEAR(norm2(at(p.H)), norm2(at(q.H)), 1e-12);
  EXPECT_NEAR(norm2(at(cov_bar(p, p.Lo))), norm2(at(cov_bar(q, q.Lo))), 1e-10);
  // Affine reparameterization.
  std::vector<double> A = {1.2, 0.3, 0, 0.1, -0.2, 0.9, 0.1, 0, 0, 0.2, 1.1, 0.3, 0.1, 0, -0.4, 0.8};
  std::vector<double> c = {0.05, 0.02, -0.03, 0.01};
  // Solve A z + c = y for z.
  auto im2 = patches::reparameterized(im, A, c);
  std::vector<double> rhs(4);
  for (int i = 0; i < 4; ++i) rhs[i] = y[i] - c[i];
  auto Ainv = invert_values(A, 4);
  std::vector<double> z(4, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) z[i] += Ainv[i * 4 + j] * rhs[j];
  auto r = make(g, im2, z);
  EXPECT_NEAR(norm2(at(p.Lo)), norm2(at(r.Lo)), 1e-10);
  EXPECT_NEAR(at(p.j_bar)[0], at(r.j_bar)[0], 1e-10);
  EXPECT_NEAR(norm2(at(cov_bar(p, p.Lo))), norm2(at(cov_bar(r, r.Lo))), 1e-9);
}

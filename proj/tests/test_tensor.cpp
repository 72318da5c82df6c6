#include <gtest/gtest.h>

#include <random>

#include "qgeo/tensor/labeled_tensor.hpp"

using namespace qgeo;
using J = Jet<double>;

TEST(Jet, ProductOfCoordinates) {
  auto f = jet_eval<double>([](const std::vector<J>& x) { return x[0] * x[1]; }, {0.0, 0.0}, 2);
  EXPECT_DOUBLE_EQ(f.partial({1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(f.partial({2, 0}), 0.0);
  EXPECT_DOUBLE_EQ(f.partial({0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(f.partial({1, 0}), 0.0);
}

TEST(Jet, ExpTaylorSeries) {
  auto f = jet_eval<double>([](const std::vector<J>& x) { return exp(x[0]); }, {0.0, 0.0}, 4);
  double fact = 1.0;
  for (int d = 0; d <= 4; ++d) {
    if (d) fact *= d;
    EXPECT_NEAR(f.coeff({d, 0}), 1.0 / fact, 1e-15);
    EXPECT_NEAR(f.partial({d, 0}), 1.0, 1e-14);
  }
  EXPECT_EQ(f.coeff({1, 1}), 0.0);
}

TEST(Jet, AppendixExponent) {
  const double s = 0.7, t = -1.3;
  auto f = jet_eval<double>([&](const std::vector<J>& x) { return s * x[1] * x[1] + t * x[1] * x[2]; },
                            {0.0, 0.0, 0.0, 0.0}, 2);
  EXPECT_DOUBLE_EQ(f.partial({0, 2, 0, 0}), 2 * s);
  EXPECT_DOUBLE_EQ(f.partial({0, 1, 1, 0}), t);
}

TEST(Jet, OrderBudgetIsEnforced) {
  EXPECT_THROW(JetSpace::get(3, jet_order_max() + 1), ConfigError);
  EXPECT_THROW(JetSpace::get(10, 2), ConfigError);
  auto f = jet_eval<double>([](const std::vector<J>& x) { return x[0]; }, {0.0}, 0);
  EXPECT_THROW(f.derivative(0), ConfigError);
}

TEST(Jet, ElementaryFunctionsAgreeWithIdentities) {
  auto r = jet_eval<double>(
      [](const std::vector<J>& x) {
        J a = 1.5 + x[0] * x[1] + 0.3 * x[2] * x[2] * x[2];
        return std::vector<J>{sqrt(a) * sqrt(a) - a, reciprocal(a) * a - 1.0, log(exp(a)) - a,
                              sin(a) * sin(a) + cos(a) * cos(a) - 1.0, pow(a, 2.5) - a * a * sqrt(a)};
      },
      {0.2, -0.4, 0.1}, 5);
  for (const auto& j : r)
    for (int m = 0; m < j.size(); ++m) EXPECT_NEAR(j[m], 0.0, 1e-12);
}

TEST(Jet, MatchesCentralDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  // Random degree-4 polynomial in three variables.
  std::vector<std::array<int, 3>> mons;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b)
      for (int c = 0; a + b + c <= 4; ++c) mons.push_back({a, b, c});
  std::vector<double> coef;
  for (std::size_t i = 0; i < mons.size(); ++i) coef.push_back(U(rng));
  auto poly = [&](const auto& x) {
    using T = std::decay_t<decltype(x[0])>;
    T s = T(0.0);
    for (std::size_t i = 0; i < mons.size(); ++i) {
      T m = T(coef[i]);
      for (int v = 0; v < 3; ++v)
        for (int p = 0; p < mons[i][v]; ++p) m = m * x[v];
      s = s + m;
    }
    return s;
  };
  const std::vector<double> x0 = {0.3, -0.2, 0.5};
  auto f = jet_eval<double>([&](const std::vector<J>& x) { return poly(x); }, x0, 4);
  auto val = [&](std::vector<double> x) { return poly(x); };
  const double h = 1e-2;
  // 6th-order central first derivative, applied recursively.
  std::function<double(std::vector<double>, std::vector<int>)> fd = [&](std::vector<double> x,
                                                                        std::vector<int> e) -> double {
    int v = -1;
    for (int i = 0; i < 3; ++i)
      if (e[i]) v = i;
    if (v < 0) return val(x);
    e[v]--;
    const double w[3] = {45.0 / 60, -9.0 / 60, 1.0 / 60};
    double s = 0.0;
    for (int j = 1; j <= 3; ++j) {
      auto xp = x, xm = x;
      xp[v] += j * h;
      xm[v] -= j * h;
      s += w[j - 1] * (fd(xp, e) - fd(xm, e));
    }
    return s / h;
  };
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int c = 0; a + b + c <= 3; ++c) {
        const double exact = f.partial({a, b, c});
        EXPECT_NEAR(fd(x0, {a, b, c}), exact, 1e-6 * (1 + std::abs(exact))) << a << b << c;
      }
}

TEST(Jet, CompositionMatchesDirectEvaluation) {
  // f(x) = exp(x0) * x1, x(y) = (y0 + y0 y1, sin y1); compare with direct chain.
  const std::vector<double> y0 = {0.1, 0.4};
  auto xs = jet_eval<double>([](const std::vector<J>& y) { return std::vector<J>{y[0] + y[0] * y[1], sin(y[1])}; },
                             y0, 5);
  std::vector<double> x0 = {xs[0].value(), xs[1].value()};
  auto f = jet_eval<double>([](const std::vector<J>& x) { return exp(x[0]) * x[1]; }, x0, 5);
  std::vector<J> du;
  for (int a = 0; a < 2; ++a) du.push_back(xs[a] - x0[a]);
  Composer comp(*f.space(), 5, du);
  J composed = comp(f);
  J direct = exp(xs[0]) * xs[1];
  ASSERT_EQ(composed.size(), direct.size());
  for (int m = 0; m < direct.size(); ++m) EXPECT_NEAR(composed[m], direct[m], 1e-13);
}

TEST(Jet, DualCarriesFirstVariation) {
  using JD = Jet<Dual>;
  const JetSpace& sp = JetSpace::get(2, 3);
  JD x = JD::variable(sp, 0, Dual(0.5, 1.0));  // x0 + t
  JD f = exp(x * x);
  // d/dt exp((x0+t+dx)^2) coefficient of dx^1 equals d/dx0 of 2 x0 exp(x0^2).
  const double x0 = 0.5;
  EXPECT_NEAR(f[0].v, std::exp(x0 * x0), 1e-14);
  EXPECT_NEAR(f[0].d, 2 * x0 * std::exp(x0 * x0), 1e-14);
  EXPECT_NEAR(f[1].d, (2 + 4 * x0 * x0) * std::exp(x0 * x0), 1e-13);
}

using T = LabeledTensor<double>;

TEST(LabeledTensor, TraceOfIdentity) {
  T id({{Kind::tangent, Var::down, 4}, {Kind::tangent, Var::up, 4}});
  for (int i = 0; i < 4; ++i) id(i, i) = 1.0;
  EXPECT_DOUBLE_EQ(contract(id, {{0, 1}})[0], 4.0);
}

TEST(LabeledTensor, MetricTimesInverseIsKronecker) {
  T g({{Kind::tangent, Var::down, 3}, {Kind::tangent, Var::down, 3}});
  T gi({{Kind::tangent, Var::up, 3}, {Kind::tangent, Var::up, 3}});
  const double a[3][3] = {{2, 0.5, 0}, {0.5, 1, 0.2}, {0, 0.2, 3}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = a[i][j];
  // Inverse by cofactors.
  const double det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                     a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      gi(i, j) = (a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0]) / det;
    }
  auto d = einsum("ab,bc->ac", g, gi);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(d(i, j), i == j ? 1.0 : 0.0, 1e-14);
  // Contracting two lower slots through g^{-1} gives the dimension.
  EXPECT_NEAR(contract(g, {{0, 1}}, {&gi})[0], 3.0, 1e-14);
  EXPECT_THROW(contract(g, {{0, 1}}), UsageError);
}

TEST(LabeledTensor, KindMismatchIsRejected) {
  T a({{Kind::tangent, Var::down, 2}, {Kind::normal, Var::up, 2}});
  EXPECT_THROW(contract(a, {{0, 1}}), UsageError);
  EXPECT_THROW(einsum("aa->", a), UsageError);
}

TEST(LabeledTensor, SymmetrizationNormalization) {
  T s({{Kind::ambient, Var::down, 3}, {Kind::ambient, Var::down, 3}});
  s(0, 1) = s(1, 0) = 2.0;
  s(2, 2) = 1.0;
  EXPECT_EQ(max_abs(symmetrize(s, {0, 1}, Symmetry::antisym)), 0.0);
  T t({{Kind::ambient, Var::down, 3}, {Kind::ambient, Var::down, 3}, {Kind::ambient, Var::down, 3}});
  t(0, 1, 2) = 6.0;
  auto r = symmetrize(t, {0, 1, 2}, Symmetry::sym);
  const int p[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (auto& q : p) EXPECT_DOUBLE_EQ(r(q[0], q[1], q[2]), 1.0);
  EXPECT_DOUBLE_EQ(r(0, 0, 0), 0.0);
}

TEST(LabeledTensor, AgreesWithBruteForceLoops) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1, 1);
  const int n = 8;
  const Slot s{Kind::ambient, Var::down, n};
  T a({s, s, s, s}), b({s, s, s});
  for (auto& x : a.data()) x = U(rng);
  for (auto& x : b.data()) x = U(rng);
  auto c = einsum("ijkl,jlm->ikm", a, b);
  double err = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) {
        double v = 0;
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) v += a(i, j, k, l) * b(j, l, m);
        err = std::max(err, std::abs(v - c(i, k, m)));
      }
  EXPECT_LT(err, 1e-12);
  auto anti = symmetrize(a, {0, 1, 3}, Symmetry::antisym);
  double err2 = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = (a(i, j, k, l) - a(j, i, k, l) - a(i, l, k, j) - a(l, j, k, i) + a(j, l, k, i) +
                            a(l, i, k, j)) / 6.0;
          err2 = std::max(err2, std::abs(v - anti(i, j, k, l)));
        }
  EXPECT_LT(err2, 1e-14);
  auto tri = einsum("ijkl,jlm,mi->k", a, b, einsum("ijkk->ij", a));
  double err3 = 0;
  for (int k = 0; k < n; ++k) {
    double v = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) {
            double t = 0;
            for (int q = 0; q < n; ++q) t += a(m, i, q, q);
            v += a(i, j, k, l) * b(j, l, m) * t;
          }
    err3 = std::max(err3, std::abs(v - tri(k)));
  }
  EXPECT_LT(err3, 1e-10);
}

TEST(LabeledTensor, BlockExtraction) {
  const Slot s{Kind::ambient, Var::down, 5};
  T a({s, s});
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) a(i, j) = 10 * i + j;
  auto b = block(a, {Kind::tangent, Kind::normal}, 2);
  EXPECT_EQ(b.dim(0), 2);
  EXPECT_EQ(b.dim(1), 3);
  EXPECT_EQ(b(1, 2), 14.0);
}

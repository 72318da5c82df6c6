#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "qgeo/errors.hpp"

namespace qgeo {

// Nodes and coordinate-measure weights on a chart domain.
struct QuadratureGrid {
  int dim = 0;
  std::vector<std::vector<double>> nodes;
  std::vector<double> weights;
  std::vector<bool> periodic;

  std::size_t size() const { return nodes.size(); }
};

struct Rule1D {
  std::vector<double> x, w;
  bool periodic = false;
};

// Gauss-Legendre on [a, b], Newton iteration on the three-term recurrence.
inline Rule1D gauss_legendre(int m, double a, double b) {
  if (m < 1) throw UsageError("gauss_legendre: need at least one node");
  Rule1D r;
  r.x.resize(m);
  r.w.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double wt = 2 / ((1 - x * x) * dp * dp);
    r.x[i] = 0.5 * (a + b) + 0.5 * (b - a) * x;
    r.w[i] = 0.5 * (b - a) * wt;
  }
  return r;
}

// Periodic trapezoid rule on [a, a + period), shifted by half a step.
inline Rule1D trapezoid(int m, double a, double period) {
  if (m < 1) throw UsageError("trapezoid: need at least one node");
  Rule1D r;
  r.periodic = true;
  for (int i = 0; i < m; ++i) {
    r.x.push_back(a + period * (i + 0.5) / m);
    r.w.push_back(period / m);
  }
  return r;
}

inline QuadratureGrid tensor_grid(const std::vector<Rule1D>& rules) {
  QuadratureGrid g;
  g.dim = static_cast<int>(rules.size());
  for (const auto& r : rules) g.periodic.push_back(r.periodic);
  g.nodes = {{}};
  g.weights = {1.0};
  for (const auto& r : rules) {
    std::vector<std::vector<double>> nn;
    std::vector<double> ww;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      for (std::size_t j = 0; j < r.x.size(); ++j) {
        auto p = g.nodes[i];
        p.push_back(r.x[j]);
        nn.push_back(std::move(p));
        ww.push_back(g.weights[i] * r.w[j]);
      }
    g.nodes = std::move(nn);
    g.weights = std::move(ww);
  }
  return g;
}

// Cartesian nodes for the closed unit ball in R^k (k = 2 or 4), Lebesgue
// weights. The radius is r = tan(theta / 2) with Gauss-Legendre in theta on
// [0, pi/2]: for inverse-stereographic hemisphere charts this is the polar
// angle, in which pulled-back integrands are smooth trigonometric functions.
// The angle is a trapezoid rule (k = 2) or Hopf coordinates on S^3 (k = 4).
inline QuadratureGrid unit_ball_grid(int k, int nr, int nang) {
  if (k != 2 && k != 4) throw ConfigError("unit ball grid: k must be 2 or 4");
  if (nang < 2 || nang % 2) throw ConfigError("unit ball grid: angular count must be even");
  QuadratureGrid g;
  g.dim = k;
  g.periodic.assign(k, false);
  Rule1D R = gauss_legendre(nr, 0.0, std::numbers::pi / 2);
  for (std::size_t i = 0; i < R.x.size(); ++i) {
    const double c = std::cos(R.x[i] / 2);
    R.w[i] *= 0.5 / (c * c);
    R.x[i] = std::tan(R.x[i] / 2);
  }
  if (k == 2) {
    const Rule1D T = trapezoid(nang, 0.0, 2 * std::numbers::pi);
    for (std::size_t i = 0; i < R.x.size(); ++i)
      for (std::size_t j = 0; j < T.x.size(); ++j) {
        g.nodes.push_back({R.x[i] * std::cos(T.x[j]), R.x[i] * std::sin(T.x[j])});
        g.weights.push_back(R.w[i] * R.x[i] * T.w[j]);
      }
    return g;
  }
  // S^3: (sin e cos a, sin e sin a, cos e cos b, cos e sin b) with s = sin^2 e,
  // measure ds da db / 2, so Cartesian polynomials are integrated exactly.
  const Rule1D E = gauss_legendre(std::max(1, nang / 2), 0.0, 1.0);
  const Rule1D A = trapezoid(nang, 0.0, 2 * std::numbers::pi);
  for (std::size_t i = 0; i < R.x.size(); ++i)
    for (std::size_t e = 0; e < E.x.size(); ++e)
      for (std::size_t a = 0; a < A.x.size(); ++a)
        for (std::size_t b = 0; b < A.x.size(); ++b) {
          const double r = R.x[i], se = std::sqrt(E.x[e]), ce = std::sqrt(1 - E.x[e]);
          g.nodes.push_back({r * se * std::cos(A.x[a]), r * se * std::sin(A.x[a]), r * ce * std::cos(A.x[b]),
                             r * ce * std::sin(A.x[b])});
          g.weights.push_back(R.w[i] * r * r * r * 0.5 * E.w[e] * A.w[a] * A.w[b]);
        }
  return g;
}

}  // namespace qgeo

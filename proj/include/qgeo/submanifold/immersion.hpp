#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "qgeo/ambient/metric_field.hpp"
#include "qgeo/ambient/polynomial.hpp"

namespace qgeo {

// Chart map y -> x(y) of an immersed k-dimensional patch in an n-dimensional chart.
struct Immersion {
  int k = 0;
  int n = 0;
  std::function<JetVec(const JetVec&)> map;
  std::string name;

  JetVec jet(const std::vector<double>& y0, int order) const {
    if (static_cast<int>(y0.size()) != k) throw UsageError("immersion: point dimension mismatch");
    JetVec x = jet_eval<double>(map, y0, order);
    if (static_cast<int>(x.size()) != n) throw UsageError("immersion: component count mismatch");
    return x;
  }
  std::vector<double> point(const std::vector<double>& y0) const {
    std::vector<double> x;
    for (const auto& j : jet(y0, 0)) x.push_back(j.value());
    return x;
  }
};

namespace patches {

// y -> (y, 0): coordinate k-plane.
inline Immersion affine(int k, int n) {
  return {k, n, [k, n](const JetVec& y) {
            JetVec x(n, JetD(0.0));
            for (int a = 0; a < k; ++a) x[a] = y[a];
            return x;
          },
          "affine-plane"};
}

// Graph y -> (y, u(y)) with polynomial heights.
inline Immersion graph(int k, int n, std::vector<Polynomial> u, std::string name = "graph") {
  return {k, n, [k, n, u](const JetVec& y) {
            JetVec x(n, JetD(0.0));
            for (int a = 0; a < k; ++a) x[a] = y[a];
            for (int b = k; b < n; ++b) x[b] = u[b - k](y);
            return x;
          },
          std::move(name)};
}

// Graph with random quadratic-to-quartic heights; the shape has curvature of order `amp`.
inline Immersion random_graph(int k, int n, std::uint64_t seed, double amp = 0.4, int terms = 5) {
  std::mt19937_64 rng(seed);
  std::vector<Polynomial> u;
  for (int b = k; b < n; ++b) u.push_back(random_polynomial(rng, k, terms, 2, 4, amp));
  return graph(k, n, std::move(u), "random-graph-" + std::to_string(seed));
}

// Stereographic projection of the unit sphere in R^{n+1} from (0, ..., 0, 1).
inline JetVec stereographic(const JetVec& X) {
  const int n = static_cast<int>(X.size()) - 1;
  JetD s = reciprocal(1.0 - X[n]);
  JetVec x(n);
  for (int a = 0; a < n; ++a) x[a] = X[a] * s;
  return x;
}

// Points of S^2 by (z, phi): (sqrt(1 - z^2) cos phi, sqrt(1 - z^2) sin phi, z); area element dz dphi.
inline JetVec s2_point(const JetD& z, const JetD& phi) {
  JetD r = sqrt(1.0 - z * z);
  return {r * cos(phi), r * sin(phi), z};
}

// Points of S^3 by (u, p1, p2): (sqrt(1-u) e^{i p1}, sqrt(u) e^{i p2}); area element du dp1 dp2 / 2.
inline JetVec s3_point(const JetD& u, const JetD& p1, const JetD& p2) {
  JetD a = sqrt(1.0 - u), b = sqrt(u);
  return {a * cos(p1), a * sin(p1), b * cos(p2), b * sin(p2)};
}

// Points of S^4 by (z, u, p1, p2); area element (1 - z^2) dz du dp1 dp2 / 2.
inline JetVec s4_point(const JetD& z, const JetD& u, const JetD& p1, const JetD& p2) {
  JetD r = sqrt(1.0 - z * z);
  JetVec w = s3_point(u, p1, p2);
  return {r * w[0], r * w[1], r * w[2], r * w[3], z};
}

// Equatorial S^k (k = 2 or 4) of the unit S^n, in the stereographic chart of S^n.
inline Immersion equatorial_sphere(int k, int n) {
  if (k != 2 && k != 4) throw ConfigError("equatorial sphere: k must be 2 or 4");
  return {k, n, [k, n](const JetVec& y) {
            JetVec X = k == 2 ? s2_point(y[0], y[1]) : s4_point(y[0], y[1], y[2], y[3]);
            JetVec full(n + 1, JetD(0.0));
            for (int a = 0; a <= k; ++a) full[a] = X[a];
            return stereographic(full);
          },
          "equatorial-S" + std::to_string(k)};
}

// Equatorial S^k as the flat coordinate plane of the chart (covers all but one point).
inline Immersion equatorial_plane(int k, int n) {
  Immersion p = affine(k, n);
  p.name = "equatorial-plane";
  return p;
}

// Clifford torus (cos t, sin t, cos p, sin p)/sqrt2 in the unit S^3 chart.
inline Immersion clifford_torus() {
  return {2, 3, [](const JetVec& y) {
            const double c = 1.0 / std::sqrt(2.0);
            return stereographic({cos(y[0]) * c, sin(y[0]) * c, cos(y[1]) * c, sin(y[1]) * c});
          },
          "clifford-torus"};
}

// S^2(1/sqrt2) x S^2(1/sqrt2) in the unit S^5 chart, coordinates (z1, phi1, z2, phi2).
inline Immersion s2xs2() {
  return {4, 5, [](const JetVec& y) {
            const double c = 1.0 / std::sqrt(2.0);
            JetVec a = s2_point(y[0], y[1]), b = s2_point(y[2], y[3]);
            JetVec X;
            for (auto& v : a) X.push_back(v * c);
            for (auto& v : b) X.push_back(v * c);
            return stereographic(X);
          },
          "s2xs2"};
}

// Product of four circles of radius 1/2 in the unit S^7 chart.
inline Immersion t4() {
  return {4, 7, [](const JetVec& y) {
            JetVec X;
            for (int i = 0; i < 4; ++i) {
              X.push_back(cos(y[i]) * 0.5);
              X.push_back(sin(y[i]) * 0.5);
            }
            return stereographic(X);
          },
          "t4"};
}

// Cylinder R x S^3 in R^n (n >= 5), coordinates (s, u, p1, p2).
inline Immersion cylinder(int n) {
  return {4, n, [n](const JetVec& y) {
            JetVec w = s3_point(y[1], y[2], y[3]);
            JetVec x(n, JetD(0.0));
            x[0] = y[0];
            for (int a = 0; a < 4; ++a) x[1 + a] = w[a];
            return x;
          },
          "cylinder"};
}

// Totally geodesic hemisphere |x'|^2 + z^2 = R^2 (x' in R^k) in hyperbolic upper half space,
// parameterized by the horizontal coordinates.
inline Immersion hemisphere_graph(int k, int n, double R) {
  return {k, n, [k, n, R](const JetVec& y) {
            JetD r2(0.0);
            for (int a = 0; a < k; ++a) r2 += y[a] * y[a];
            JetVec x(n, JetD(0.0));
            for (int a = 0; a < k; ++a) x[a] = y[a];
            x[n - 1] = sqrt(R * R - r2);
            return x;
          },
          "hemisphere"};
}

// Same hemisphere by (tau, angles) with height z = R e^{tau}, tau < 0, and the
// horizontal radius R sqrt(1 - e^{2 tau}); angles are (phi) for k = 2 and (u, p1, p2) for k = 4.
inline Immersion hemisphere_log_height(int k, int n, double R) {
  if (k != 2 && k != 4) throw ConfigError("hemisphere: k must be 2 or 4");
  return {k, n, [k, n, R](const JetVec& y) {
            JetD s = exp(y[0]);
            JetD rho = sqrt(1.0 - s * s) * R;
            JetVec w = k == 2 ? JetVec{cos(y[1]), sin(y[1])} : s3_point(y[1], y[2], y[3]);
            JetVec x(n, JetD(0.0));
            for (int a = 0; a < k; ++a) x[a] = rho * w[a];
            x[n - 1] = s * R;
            return x;
          },
          "hemisphere-log-height"};
}

// Curves in R^3 (k = 1).
inline Immersion circle(double r) {
  return {1, 3, [r](const JetVec& y) { return JetVec{cos(y[0]) * r, sin(y[0]) * r, JetD(0.0)}; }, "circle"};
}
inline Immersion line() {
  return {1, 3, [](const JetVec& y) { return JetVec{y[0], y[0] * 0.5, JetD(0.0)}; }, "line"};
}
inline Immersion ellipse(double a, double b) {
  return {1, 3, [a, b](const JetVec& y) { return JetVec{cos(y[0]) * a, sin(y[0]) * b, JetD(0.0)}; }, "ellipse"};
}

// x(A y + c): affine reparameterization of the chart.
inline Immersion reparameterized(const Immersion& p, std::vector<double> A, std::vector<double> c) {
  const int k = p.k;
  return {k, p.n, [p, A, c, k](const JetVec& y) {
            JetVec z(k);
            for (int i = 0; i < k; ++i) {
              z[i] = JetD(c[i]);
              for (int j = 0; j < k; ++j) z[i] += y[j] * A[i * k + j];
            }
            return p.map(z);
          },
          p.name + "-reparameterized"};
}

}  // namespace patches
}  // namespace qgeo

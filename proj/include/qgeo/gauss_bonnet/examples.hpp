#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qgeo/ambient/catalog.hpp"
#include "qgeo/gauss_bonnet/quadrature.hpp"
#include "qgeo/submanifold/immersion.hpp"

namespace qgeo {

// One chart of an atlas together with the nodes it integrates over. The chart
// domains of an atlas tile the submanifold up to measure zero.
struct ChartPiece {
  Immersion patch;
  QuadratureGrid grid;
};

struct ClosedExample {
  std::string name;
  MetricField g;
  std::vector<ChartPiece> atlas;
  double lambda = 0.0;  // Ric = lambda (n - 1) g when einstein
  std::optional<double> area;
  int chi = 0;
  bool minimal = false, einstein = false, totally_geodesic = false;
  // Every natural scalar is constant along the submanifold.
  bool homogeneous = false;

  int k() const { return atlas.front().patch.k; }
  int n() const { return atlas.front().patch.n; }
  std::size_t node_count() const {
    std::size_t s = 0;
    for (const auto& p : atlas) s += p.grid.size();
    return s;
  }
};

// Volume of the unit round S^k, k even: 2 (2 pi)^{k/2} / (k - 1)!!.
inline double sphere_volume(int k) {
  if (k % 2) throw DomainError("sphere_volume: k must be even");
  double df = 1;
  for (int j = k - 1; j > 1; j -= 2) df *= j;
  return 2 * std::pow(2 * std::numbers::pi, k / 2) / df;
}

inline double factorial(int m) {
  double f = 1;
  for (int j = 2; j <= m; ++j) f *= j;
  return f;
}

inline double double_factorial(int m) {
  double f = 1;
  for (int j = m; j > 1; j -= 2) f *= j;
  return f;
}

namespace patches {

// Inverse stereographic projection R^k -> S^k; sign = -1 sends the unit ball
// to the lower hemisphere, sign = +1 to the upper one.
inline JetVec inverse_stereographic(const JetVec& y, double sign) {
  JetD r2(0.0);
  for (const auto& v : y) r2 += v * v;
  JetD s = reciprocal(1.0 + r2);
  JetVec X;
  for (const auto& v : y) X.push_back(v * s * 2.0);
  X.push_back((r2 - 1.0) * s * sign);
  return X;
}

// Hemisphere chart of the equatorial S^k of the unit S^n (ambient stereographic chart).
inline Immersion equatorial_hemisphere(int k, int n, double sign) {
  return {k, n, [k, n, sign](const JetVec& y) {
            JetVec X = inverse_stereographic(y, sign);
            JetVec full(n + 1, JetD(0.0));
            for (int a = 0; a <= k; ++a) full[a] = X[a];
            return stereographic(full);
          },
          sign < 0 ? "equatorial-lower" : "equatorial-upper"};
}

}  // namespace patches

namespace closed {

// Equatorial S^k in S^n with the two hemisphere charts; good for any smooth integrand.
inline ClosedExample equatorial_sphere(int k, int n, int nr = 8, int nang = 8) {
  ClosedExample e;
  e.name = "equatorial-S" + std::to_string(k) + "-in-S" + std::to_string(n);
  e.g = metrics::sphere(n);
  for (double s : {-1.0, 1.0}) e.atlas.push_back({patches::equatorial_hemisphere(k, n, s), unit_ball_grid(k, nr, nang)});
  e.lambda = 1;
  e.area = sphere_volume(k);
  e.chi = 2;
  e.minimal = e.einstein = e.totally_geodesic = true;
  e.homogeneous = true;
  return e;
}

// The same sphere in latitude coordinates, exact for orbit-constant integrands
// with very few nodes.
inline ClosedExample equatorial_sphere_polar(int k, int n, int m = 2) {
  ClosedExample e = equatorial_sphere(k, n, 1, 2);
  e.name += "-polar";
  const double pi = std::numbers::pi;
  QuadratureGrid g = k == 2 ? tensor_grid({gauss_legendre(m, -1, 1), trapezoid(m, 0, 2 * pi)})
                            : tensor_grid({gauss_legendre(m + 1, -1, 1), gauss_legendre(m, 0, 1), trapezoid(m, 0, 2 * pi),
                                           trapezoid(m, 0, 2 * pi)});
  e.atlas = {{patches::equatorial_sphere(k, n), g}};
  return e;
}

inline ClosedExample clifford_torus(int m = 4) {
  ClosedExample e;
  e.name = "clifford-torus";
  e.g = metrics::sphere(3);
  const double pi = std::numbers::pi;
  e.atlas = {{patches::clifford_torus(), tensor_grid({trapezoid(m, 0, 2 * pi), trapezoid(m, 0, 2 * pi)})}};
  e.lambda = 1;
  e.area = 2 * pi * pi;
  e.chi = 0;
  e.minimal = e.einstein = true;
  e.homogeneous = true;
  return e;
}

inline ClosedExample s2xs2(int m = 2) {
  ClosedExample e;
  e.name = "s2xs2-in-S5";
  e.g = metrics::sphere(5);
  const double pi = std::numbers::pi;
  e.atlas = {{patches::s2xs2(), tensor_grid({gauss_legendre(m, -1, 1), trapezoid(m, 0, 2 * pi),
                                             gauss_legendre(m, -1, 1), trapezoid(m, 0, 2 * pi)})}};
  e.lambda = 1;
  e.area = 4 * pi * pi;
  e.chi = 4;
  e.minimal = e.einstein = true;
  e.homogeneous = true;
  return e;
}

// Homogeneous, so one node per circle is exact for natural scalars.
inline ClosedExample t4(int m = 1) {
  ClosedExample e;
  e.name = "t4-in-S7";
  e.g = metrics::sphere(7);
  const double pi = std::numbers::pi;
  const Rule1D r = trapezoid(m, 0, 2 * pi);
  e.atlas = {{patches::t4(), tensor_grid({r, r, r, r})}};
  e.lambda = 1;
  e.area = std::pow(pi, 4);
  e.chi = 0;
  e.minimal = e.einstein = true;
  e.homogeneous = true;
  return e;
}

inline std::vector<std::string> catalog_names() {
  return {"equatorial-S2-in-S3", "equatorial-S4-in-S5", "clifford-torus", "s2xs2-in-S5", "t4-in-S7"};
}

inline ClosedExample by_name(const std::string& name) {
  if (name == "equatorial-S2-in-S3") return equatorial_sphere_polar(2, 3);
  if (name == "equatorial-S4-in-S5") return equatorial_sphere_polar(4, 5);
  if (name == "clifford-torus") return clifford_torus();
  if (name == "s2xs2-in-S5") return s2xs2();
  if (name == "t4-in-S7") return t4();
  throw UsageError("unknown closed example '" + name + "'");
}

}  // namespace closed

}  // namespace qgeo

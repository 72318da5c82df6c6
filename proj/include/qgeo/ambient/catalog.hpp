#pragma once

#include <random>
#include <string>
#include <vector>

#include "qgeo/ambient/metric_field.hpp"
#include "qgeo/ambient/polynomial.hpp"

namespace qgeo::metrics {

inline MetricField flat(int n) {
  return {n, [n](const JetVec&) {
            JetMat m(n, JetVec(n, JetD(0.0)));
            for (int a = 0; a < n; ++a) m[a][a] = JetD(1.0);
            return m;
          },
          "flat"};
}

// e^{2 phi} delta for an arbitrary conformal exponent phi.
inline MetricField conformally_flat(int n, std::function<JetD(const JetVec&)> phi, std::string name) {
  return {n, [n, phi](const JetVec& x) {
            JetD f = exp(phi(x) * 2.0);
            JetMat m(n, JetVec(n, JetD(0.0)));
            for (int a = 0; a < n; ++a) m[a][a] = f;
            return m;
          },
          std::move(name)};
}

// Unit round sphere in the stereographic chart: 4 (1 + |x|^2)^{-2} delta.
inline MetricField sphere(int n) {
  return {n, [n](const JetVec& x) {
            JetD r2(0.0);
            for (const auto& xi : x) r2 += xi * xi;
            JetD f = 4.0 * reciprocal(square(1.0 + r2));
            JetMat m(n, JetVec(n, JetD(0.0)));
            for (int a = 0; a < n; ++a) m[a][a] = f;
            return m;
          },
          "sphere"};
}

// Hyperbolic upper half space z^{-2} delta, z the last coordinate.
inline MetricField hyperbolic(int n) {
  return {n, [n](const JetVec& x) {
            JetD f = reciprocal(square(x[n - 1]));
            JetMat m(n, JetVec(n, JetD(0.0)));
            for (int a = 0; a < n; ++a) m[a][a] = f;
            return m;
          },
          "hyperbolic"};
}

// delta + Q with Q symmetric polynomial components.
inline MetricField polynomial(int n, std::vector<std::vector<Polynomial>> q, std::string name = "polynomial") {
  return {n, [n, q](const JetVec& x) {
            JetMat m(n, JetVec(n, JetD(0.0)));
            for (int a = 0; a < n; ++a)
              for (int b = 0; b < n; ++b) {
                const auto& p = q[std::min(a, b)][std::max(a, b)];
                m[a][b] = (a == b ? JetD(1.0) : JetD(0.0)) + p(x);
              }
            return m;
          },
          std::move(name)};
}

// Deterministic random metric delta + Q(x), Q of degree 2..4 with sup-norm at most amp on the unit box.
inline MetricField random_polynomial(int n, std::uint64_t seed, double amp = 0.05, int terms = 4) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Polynomial>> q(n, std::vector<Polynomial>(n));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) q[a][b] = qgeo::random_polynomial(rng, n, terms, 2, 4, amp);
  return polynomial(n, std::move(q), "random-polynomial-" + std::to_string(seed));
}

// Diagonal metric sum_a e^{2 f_a} (dx^a)^2.
inline MetricField diagonal_exponential(int n, std::vector<Polynomial> f, std::string name = "diagonal-exponential") {
  return {n, [n, f](const JetVec& x) {
            JetMat m(n, JetVec(n, JetD(0.0)));
            for (int a = 0; a < n; ++a) m[a][a] = exp(f[a](x) * 2.0);
            return m;
          },
          std::move(name)};
}

// The example family with f_1 = s (x^2)^2 + t x^2 x^3 + u x^1 x^5, f_2 = v x^1 x^5,
// f_3 = -(u + v) x^1 x^5 and all other f_a = 0 (coordinates numbered from 1).
inline MetricField independence_family(int n, double s, double t, double u, double v) {
  auto mono = [n](double c, std::vector<std::pair<int, int>> pw) {
    Monomial m{c, std::vector<int>(n, 0)};
    for (auto [var, p] : pw) m.pow[var - 1] += p;
    return m;
  };
  std::vector<Polynomial> f(n, Polynomial{n, {}});
  f[0].terms = {mono(s, {{2, 2}}), mono(t, {{2, 1}, {3, 1}}), mono(u, {{1, 1}, {5, 1}})};
  f[1].terms = {mono(v, {{1, 1}, {5, 1}})};
  f[2].terms = {mono(-(u + v), {{1, 1}, {5, 1}})};
  return diagonal_exponential(n, std::move(f), "independence-family");
}

}  // namespace qgeo::metrics

#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qgeo/ambient/metric_field.hpp"
#include "qgeo/ambient/polynomial.hpp"
#include "qgeo/errors.hpp"

namespace qgeo {

// A conformal factor on the ambient chart. When vanishing_order = m > 0 the
// factor vanishes to order m along the submanifold, so every derivative of
// order < m (in particular the transverse (m - 1)-jet) is zero there.
struct ConformalFactor {
  ScalarField field;
  int vanishing_order = 0;
  std::string name;

  double operator()(const std::vector<double>& x) const { return field(x); }

  // Throws unless the recorded constraint holds at x.
  void verify_constraint(const std::vector<double>& x, double tol = 1e-12) const {
    if (vanishing_order <= 0) return;
    const JetD j = field.jet(x, vanishing_order - 1);
    for (int m = 0; m < j.size(); ++m)
      if (std::abs(j[m]) > tol)
        throw ConfigError("conformal factor '" + name + "' does not vanish to order " +
                          std::to_string(vanishing_order) + " at the base point");
  }
};

// e^{2 t u} g as a metric field.
inline MetricField rescale(const MetricField& g, const ScalarField& u, double t) {
  return {g.dim,
          [g, u, t](const JetVec& x) {
            JetMat m = g.g(x);
            const JetD f = exp(u.f(x) * (2.0 * t));
            for (auto& row : m)
              for (auto& v : row) v = v * f;
            return m;
          },
          g.name + "-rescaled"};
}

namespace factors {

inline ConformalFactor polynomial(Polynomial p, std::string name = "polynomial") {
  const int n = p.nvars;
  return {{n, [p](const JetVec& x) { return p(x); }, name}, 0, name};
}

inline ConformalFactor constant(int n, double c) {
  return {{n, [c](const JetVec&) { return JetD(c); }, "constant"}, 0, "constant"};
}

// Constant and linear terms plus `extra` monomials of degree 2..degree, every
// coefficient uniform in [-amp, amp].
inline ConformalFactor random(int n, std::uint64_t seed, int degree = 4, double amp = 0.3, int extra = 8) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-amp, amp);
  std::uniform_int_distribution<int> D(2, std::max(2, degree)), V(0, n - 1);
  Polynomial p{n, {}};
  p.terms.push_back({U(rng), std::vector<int>(n, 0)});
  for (int a = 0; a < n; ++a) {
    Monomial m{U(rng), std::vector<int>(n, 0)};
    m.pow[a] = 1;
    p.terms.push_back(m);
  }
  for (int i = 0; i < extra && degree >= 2; ++i) {
    Monomial m{U(rng), std::vector<int>(n, 0)};
    const int d = D(rng);
    for (int j = 0; j < d; ++j) m.pow[V(rng)]++;
    p.terms.push_back(m);
  }
  return polynomial(std::move(p), "random-" + std::to_string(seed));
}

// Random element of the order-th power of the ideal of the graph
// {x_A = u_A(x_1..x_k)}: sum over monomials of degree `order` in the defining
// functions f_A = x_A - u_A, each with a random quadratic coefficient.
inline ConformalFactor vanishing_on_graph(int k, int n, std::vector<Polynomial> heights, int order,
                                          std::uint64_t seed, double amp = 0.3) {
  if (static_cast<int>(heights.size()) != n - k) throw UsageError("vanishing factor: need one height per normal");
  if (order == 0) {
    auto f = random(n, seed, 4, amp);
    return f;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-amp, amp);
  const int m = n - k;
  // Exponent vectors of total degree `order` in m defining functions.
  std::vector<std::vector<int>> expo;
  std::vector<int> cur(m, 0);
  std::function<void(int, int)> rec = [&](int slot, int left) {
    if (slot == m - 1) {
      cur[slot] = left;
      expo.push_back(cur);
      return;
    }
    for (int e = left; e >= 0; --e) {
      cur[slot] = e;
      rec(slot + 1, left - e);
    }
  };
  rec(0, order);
  std::vector<Polynomial> coef;
  for (std::size_t i = 0; i < expo.size(); ++i) coef.push_back(qgeo::random_polynomial(rng, n, 4, 0, 2, amp));
  for (auto& c : coef) c.terms.push_back({U(rng), std::vector<int>(n, 0)});
  ScalarField f{n,
                [k, m, heights, expo, coef](const JetVec& x) {
                  std::vector<JetD> def;
                  for (int A = 0; A < m; ++A) def.push_back(x[k + A] - heights[A](x));
                  JetD s(0.0);
                  for (std::size_t i = 0; i < expo.size(); ++i) {
                    JetD t = coef[i](x);
                    for (int A = 0; A < m; ++A)
                      for (int e = 0; e < expo[i][A]; ++e) t = t * def[A];
                    s = s + t;
                  }
                  return s;
                },
                "vanishing"};
  const std::string name = "vanishing-order-" + std::to_string(order) + "-" + std::to_string(seed);
  f.name = name;
  return {f, order, name};
}

}  // namespace factors

}  // namespace qgeo

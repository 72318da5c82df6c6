#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qgeo/conformal/verifier.hpp"
#include "qgeo/gauss_bonnet/examples.hpp"

namespace qgeo {

using NodeScalar = std::function<double(const SubmanifoldPack<double>&)>;

namespace detail {

inline double det_small(std::vector<std::vector<double>> m) {
  const int k = static_cast<int>(m.size());
  double d = 1;
  for (int c = 0; c < k; ++c) {
    int piv = c;
    for (int r = c + 1; r < k; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (int r = c + 1; r < k; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int j = c; j < k; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return d;
}

}  // namespace detail

// sqrt det of the induced metric in patch coordinates.
inline double area_element(const SubmanifoldPack<double>& p) {
  std::vector<std::vector<double>> h(p.k, std::vector<double>(p.k));
  for (int a = 0; a < p.k; ++a)
    for (int b = 0; b < p.k; ++b) h[a][b] = p.intr.g(a, b).value();
  const double d = detail::det_small(h);
  if (!(d > 0)) throw NumericError("area element: induced metric is degenerate");
  return std::sqrt(d);
}

// Sum over the atlas of w f(p) sqrt det h(p), with the ambient metric
// e^{2 t u} g when u is given.
inline double integrate(const ClosedExample& ex, const NodeScalar& f, const ScalarField* u = nullptr,
                        double t = 0.0) {
  double s = 0;
  for (const auto& piece : ex.atlas)
    for (std::size_t i = 0; i < piece.grid.size(); ++i) {
      const Scene sc{ex.name, ex.g, piece.patch, piece.grid.nodes[i], {}};
      const auto p = sc.pack<double>(u, t);
      const double v = f(p) * area_element(p);
      if (!std::isfinite(v)) throw NumericError("integrate: non-finite value at a node of " + ex.name);
      s += piece.grid.weights[i] * v;
    }
  return s;
}

// Integrates several scalars with one pack per node.
inline std::vector<double> integrate_many(const ClosedExample& ex, const std::vector<NodeScalar>& fs,
                                          const ScalarField* u = nullptr, double t = 0.0) {
  std::vector<double> s(fs.size(), 0.0);
  for (const auto& piece : ex.atlas)
    for (std::size_t i = 0; i < piece.grid.size(); ++i) {
      const Scene sc{ex.name, ex.g, piece.patch, piece.grid.nodes[i], {}};
      const auto p = sc.pack<double>(u, t);
      const double da = area_element(p);
      for (std::size_t j = 0; j < fs.size(); ++j) {
        const double v = fs[j](p) * da;
        if (!std::isfinite(v)) throw NumericError("integrate: non-finite value at a node of " + ex.name);
        s[j] += piece.grid.weights[i] * v;
      }
    }
  return s;
}

inline double integrate_area(const ClosedExample& ex) {
  return integrate(ex, [](const SubmanifoldPack<double>&) { return 1.0; });
}

// Value at one node times the exact area; valid for homogeneous examples.
inline double single_point_integral(const ClosedExample& ex, const NodeScalar& f) {
  if (!ex.homogeneous || !ex.area) throw UsageError("single-point integral needs a homogeneous example with known area");
  const auto& piece = ex.atlas.front();
  const Scene sc{ex.name, ex.g, piece.patch, piece.grid.nodes.front(), {}};
  return f(sc.pack<double>()) * *ex.area;
}

// Largest |H| over all nodes.
inline double max_mean_curvature(const ClosedExample& ex) {
  double m = 0;
  for (const auto& piece : ex.atlas)
    for (const auto& y : piece.grid.nodes) {
      const auto p = Scene{ex.name, ex.g, piece.patch, y, {}}.pack<double>();
      m = std::max(m, max_abs(at(p.H)));
    }
  return m;
}

template <class F>
NodeScalar node_scalar(F f) {
  return [f](const SubmanifoldPack<double>& p) { return f(InvariantEvaluator<double>(p)); };
}

struct ChernGBReport {
  double integral = 0.0, expected = 0.0, residual = 0.0;
};

// Integral of the Pfaffian of the induced metric against (2 pi)^{k/2} chi.
inline ChernGBReport chern_gb(const ClosedExample& ex) {
  const int k = ex.k();
  if (k != 2 && k != 4) throw DomainError("chern_gb: k must be 2 or 4");
  ChernGBReport r;
  r.integral = integrate(ex, node_scalar([](const auto& e) { return e.Pf(); }));
  r.expected = std::pow(2 * std::numbers::pi, k / 2) * ex.chi;
  r.residual = std::abs(r.integral - r.expected);
  return r;
}

struct ClosedGBReport {
  double lhs = 0.0;           // lambda^{k/2} A
  double euler_term = 0.0;    // (2 pi)^{k/2} chi / (k - 1)!!
  double weyl_term = 0.0;     // (1/(k-1)!) int W_Q
  double alternate_term = 0.0;  // k = 2: int (|Lo|^2/2 - W^T); k = 4: -(1/6) int (|Wbar|^2/4 - I - 2|F|^2 + 2 G^2)
  double residual = 0.0;
  double alternate_residual = 0.0;
  double area = 0.0;
};

inline void require_minimal_einstein(const ClosedExample& ex, const char* what) {
  if (!ex.minimal || !ex.einstein) throw UsageError(std::string(what) + ": example must be minimal in an Einstein space");
  const int k = ex.k();
  if (k != 2 && k != 4) throw DomainError(std::string(what) + ": k must be 2 or 4");
}

inline double minimal_gbc4_integrand(const InvariantEvaluator<double>& e) {
  const auto& p = e.pack();
  const double w2 = einsum("abcd,abcd->", at(p.weyl_bar), at(p.weyl_bar))[0];
  const auto& c = e.tensors();
  const double f2 = einsum("ab,ab->", at(*c.F), at(*c.F))[0];
  const double g = c.G->value();
  return 0.25 * w2 - e.I() - 2 * f2 + 2 * g * g;
}

inline ClosedGBReport closed_gb(const ClosedExample& ex) {
  require_minimal_einstein(ex, "closed_gb");
  const int k = ex.k();
  ClosedGBReport r;
  std::vector<NodeScalar> fs{[](const SubmanifoldPack<double>&) { return 1.0; },
                             node_scalar([](const auto& e) { return e.W_Q(); })};
  if (k == 2)
    fs.push_back(node_scalar([](const auto& e) { return 0.5 * e.tensors().Lo_sq.value() - e.W_T_value(); }));
  else
    fs.push_back(node_scalar([](const auto& e) { return minimal_gbc4_integrand(e); }));
  const auto v = integrate_many(ex, fs);
  r.area = v[0];
  r.lhs = std::pow(ex.lambda, k / 2) * v[0];
  r.euler_term = std::pow(2 * std::numbers::pi, k / 2) * ex.chi / double_factorial(k - 1);
  r.weyl_term = v[1] / factorial(k - 1);
  r.alternate_term = k == 2 ? v[2] : -v[2] / 6.0;
  r.residual = std::abs(r.lhs - r.euler_term - r.weyl_term);
  r.alternate_residual = std::abs(r.lhs - r.euler_term - r.alternate_term);
  return r;
}

struct FactorizationReport {
  double q_residual = 0.0;         // max |Q - lambda^{k/2} (k - 1)!|
  double operator_residual = 0.0;  // max |P_k phi - prod phi|
  double max_operator = 0.0;       // max |P_k phi|, non-vacuity
};

// Test functions on the chart: bumps exp(-|y - c|^2) times low-degree monomials.
inline std::vector<std::function<JetD(const JetVec&)>> bump_functions(int k) {
  std::vector<std::function<JetD(const JetVec&)>> fs;
  for (int deg = 0; deg <= 2; ++deg)
    for (int a = 0; a < k; ++a)
      fs.push_back([deg, a, k](const JetVec& y) {
        JetD r(0.0);
        for (int b = 0; b < k; ++b) r += (y[b] - 0.1 * b) * (y[b] - 0.1 * b);
        JetD m(1.0);
        for (int d = 0; d < deg; ++d) m = m * y[(a + d) % k];
        return exp(r * -1.0) * m;
      });
  return fs;
}

// Pointwise Q = lambda^{k/2} (k-1)! and P_k = prod_j (-Lap + lambda (k/2 + j - 1)(k/2 - j)) at
// `samples` nodes of the first chart.
inline FactorizationReport factorization_check(const ClosedExample& ex, int samples = 3) {
  require_minimal_einstein(ex, "factorization_check");
  const int k = ex.k();
  FactorizationReport r;
  const double qexp = std::pow(ex.lambda, k / 2) * factorial(k - 1);
  const auto& piece = ex.atlas.front();
  const int step = std::max<int>(1, static_cast<int>(piece.grid.size()) / samples);
  for (int i = 0, used = 0; i < static_cast<int>(piece.grid.size()) && used < samples; i += step, ++used) {
    const Scene sc{ex.name, ex.g, piece.patch, piece.grid.nodes[i], {}};
    const auto p = sc.pack<double>();
    InvariantEvaluator<double> e(p);
    r.q_residual = std::max(r.q_residual, std::abs(e.Q() - qexp));
    for (const auto& f : bump_functions(k)) {
      const JetD phi = patch_function(sc, f);
      double pk, prod;
      if (k == 2) {
        pk = e.P2(phi);
        prod = -lap_bar(p, phi).value();
      } else {
        pk = e.P4(phi);
        const JetD a = -lap_bar(p, phi);
        prod = (-lap_bar(p, a) + a * (2.0 * ex.lambda)).value();
      }
      r.operator_residual = std::max(r.operator_residual, std::abs(pk - prod));
      r.max_operator = std::max(r.max_operator, std::abs(pk));
    }
  }
  return r;
}

struct CnkReport {
  double recovered = 0.0, expected = 0.0, residual = 0.0;
};

// Solves int Q = c int Pf + int W_Q on the equatorial sphere for c.
inline CnkReport c_nk_check(int k, int n) {
  if (k != 2 && k != 4) throw DomainError("c_nk_check: k must be 2 or 4");
  if (n <= k) throw DomainError("c_nk_check: need n > k");
  const ClosedExample ex = closed::equatorial_sphere_polar(k, n);
  const auto v = integrate_many(ex, {node_scalar([](const auto& e) { return e.Q(); }),
                                     node_scalar([](const auto& e) { return e.Pf(); }),
                                     node_scalar([](const auto& e) { return e.W_Q(); })});
  CnkReport r;
  r.recovered = (v[0] - v[2]) / v[1];
  r.expected = factorial(k - 1) / double_factorial(k - 1);
  r.residual = std::abs(r.recovered - r.expected);
  return r;
}

struct DivergenceReport {
  double q_divergence = 0.0, K1 = 0.0, K2 = 0.0;
  double max_abs() const { return std::max({std::abs(q_divergence), std::abs(K1), std::abs(K2)}); }
};

inline DivergenceReport divergence_integral_check(const ClosedExample& ex) {
  if (ex.k() != 4) throw DomainError("divergence_integral_check: k must be 4");
  const auto v = integrate_many(ex, {node_scalar([](const auto& e) { return e.Q_divergence(); }),
                                     node_scalar([](const auto& e) { return e.K1(); }),
                                     node_scalar([](const auto& e) { return e.K2(); })});
  return {v[0], v[1], v[2]};
}

struct TotalQReport {
  double before = 0.0, after = 0.0, residual = 0.0;
};

// int Q dA for g and for e^{2u} g over the same atlas.
inline TotalQReport total_q_invariance(const ClosedExample& ex, const ConformalFactor& u) {
  const int k = ex.k();
  if (k != 2 && k != 4) throw DomainError("total Q: k must be 2 or 4");
  const NodeScalar q = node_scalar([](const auto& e) { return e.Q(); });
  TotalQReport r;
  r.before = integrate(ex, q);
  r.after = integrate(ex, q, &u.field, 1.0);
  r.residual = std::abs(r.after - r.before) / (1.0 + std::abs(r.before));
  return r;
}

}  // namespace qgeo

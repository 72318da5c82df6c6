#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qgeo/ambient/catalog.hpp"
#include "qgeo/gauss_bonnet/suite.hpp"
#include "qgeo/submanifold/immersion.hpp"

namespace qgeo {

// Totally geodesic hemisphere |x'|^2 + z^2 = R^2 of dimension k in the upper
// half space model of H^n.
struct HyperbolicModel {
  int k = 2, n = 3;
  double R = 1.0;
  MetricField g;
  Immersion chart;  // (tau, angles), z = R e^tau
  Immersion graph;  // horizontal coordinates
  bool totally_geodesic = true;
};

inline HyperbolicModel hemisphere_model(int k, int n, double R = 1.0) {
  if (k != 2 && k != 4) throw DomainError("hemisphere model: k must be 2 or 4");
  if (n <= k) throw ConfigError("hemisphere model: need n > k");
  if (!(R > 0)) throw ConfigError("hemisphere model: radius must be positive");
  return {k, n, R, metrics::hyperbolic(n), patches::hemisphere_log_height(k, n, R), patches::hemisphere_graph(k, n, R), true};
}

// sqrt det of the induced metric from first-order jets of the chart.
inline double induced_area_density(const MetricField& g, const Immersion& patch, const std::vector<double>& y) {
  const JetVec xj = patch.jet(y, 1);
  JetVec xc;
  for (const auto& x : xj) xc.emplace_back(x.value());
  const JetMat gm = g.g(xc);
  const int k = patch.k, n = patch.n;
  std::vector<std::vector<double>> h(k, std::vector<double>(k, 0.0));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          h[a][b] += xj[i].derivative(a).value() * gm[i][j].value() * xj[j].derivative(b).value();
  const double d = detail::det_small(h);
  if (!(d > 0)) throw NumericError("induced area density: degenerate metric");
  return std::sqrt(d);
}

struct TruncationOptions {
  double panel = 1.0;   // composite rule panel length in tau
  int nodes = 10;       // Gauss-Legendre nodes per panel
};

// Area of {z > eps}: composite Gauss-Legendre in tau = log(z / R) on [log(eps / R), 0]
// times a small angular rule (the integrand is rotation invariant).
inline double truncated_area(const HyperbolicModel& m, double eps, const TruncationOptions& opt = {}) {
  if (!(eps > 0)) throw UsageError("truncated area: eps must be positive");
  if (eps >= m.R) throw DomainError("truncated area: region {z > eps} is empty");
  const double pi = std::numbers::pi;
  std::vector<Rule1D> angles;
  if (m.k == 2)
    angles = {trapezoid(2, 0, 2 * pi)};
  else
    angles = {gauss_legendre(1, 0, 1), trapezoid(2, 0, 2 * pi), trapezoid(2, 0, 2 * pi)};
  const QuadratureGrid ang = tensor_grid(angles);
  const double t0 = std::log(eps / m.R);
  const int panels = std::max(1, static_cast<int>(std::ceil(-t0 / opt.panel)));
  double s = 0;
  for (int p = 0; p < panels; ++p) {
    const double a = t0 * (1.0 - static_cast<double>(p) / panels), b = t0 * (1.0 - static_cast<double>(p + 1) / panels);
    const Rule1D T = gauss_legendre(opt.nodes, a, b);
    for (std::size_t i = 0; i < T.x.size(); ++i)
      for (std::size_t j = 0; j < ang.size(); ++j) {
        std::vector<double> y{T.x[i]};
        y.insert(y.end(), ang.nodes[j].begin(), ang.nodes[j].end());
        s += T.w[i] * ang.weights[j] * induced_area_density(m.g, m.chart, y);
      }
  }
  if (!std::isfinite(s)) throw NumericError("truncated area: non-finite result");
  return s;
}

struct TruncationFit {
  std::vector<double> eps, area;
  std::vector<int> powers;           // basis eps^{p}
  std::vector<double> coefficients;  // same order as powers
  double renormalized_area = 0.0;    // coefficient of eps^0
  double residual = 0.0;             // max relative misfit over the samples (weighted rows)
  double condition = 0.0;            // of the column-scaled design matrix
  std::vector<std::string> warnings;

  double coefficient(int p) const {
    for (std::size_t i = 0; i < powers.size(); ++i)
      if (powers[i] == p) return coefficients[i];
    throw UsageError("truncation fit: no basis power " + std::to_string(p));
  }
};

inline std::vector<double> geometric_samples(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > lo) || count < 2) throw UsageError("geometric samples: need 0 < lo < hi and count >= 2");
  std::vector<double> e;
  for (int i = 0; i < count; ++i) e.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
  return e;
}

// Least squares on eps^{1-k}, eps^{3-k}, ..., eps^{-1}, 1; odd powers of eps
// below k - 1 do not occur for a minimal submanifold. Rows are weighted by
// 1/area so the large small-eps areas do not swamp the constant term.
inline TruncationFit fit_renormalized_area(const HyperbolicModel& m, const std::vector<double>& eps,
                                           const TruncationOptions& opt = {}, double max_condition = 1e8) {
  TruncationFit f;
  for (int p = 1 - m.k; p < 0; p += 2) f.powers.push_back(p);
  f.powers.push_back(0);
  if (eps.size() < f.powers.size()) throw UsageError("truncation fit: fewer samples than basis functions");
  f.eps = eps;
  const int rows = static_cast<int>(eps.size()), cols = static_cast<int>(f.powers.size());
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd y(rows);
  for (int i = 0; i < rows; ++i) {
    f.area.push_back(truncated_area(m, eps[i], opt));
    y(i) = 1.0;
    for (int j = 0; j < cols; ++j) A(i, j) = std::pow(eps[i], f.powers[j]) / f.area.back();
  }
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(As);
  const auto sv = svd.singularValues();
  f.condition = sv(0) / sv(sv.size() - 1);
  if (!(f.condition < max_condition))
    f.warnings.push_back("ill-conditioned truncation fit, condition number " + std::to_string(f.condition));
  const Eigen::VectorXd c = As.colPivHouseholderQr().solve(y).cwiseQuotient(scale);
  f.coefficients.assign(c.data(), c.data() + cols);
  f.renormalized_area = f.coefficient(0);
  const Eigen::VectorXd r = A * c - y;
  for (int i = 0; i < rows; ++i) f.residual = std::max(f.residual, std::abs(r(i)));
  return f;
}

inline TruncationFit fit_renormalized_area(const HyperbolicModel& m) {
  return fit_renormalized_area(m, geometric_samples(1e-3, 1e-1, 12));
}

// (-2 pi)^{k/2} / (k - 1)!!
inline double renormalized_gb_constant(int k) {
  if (k % 2) throw DomainError("renormalized constant: k must be even");
  return std::pow(-2 * std::numbers::pi, k / 2) / double_factorial(k - 1);
}

struct RenormGBReport {
  double renormalized_area = 0.0, expected = 0.0, residual = 0.0;
  int chi = 1;
  double max_integrand = 0.0;  // |W_Q| (k = 2) or the minimal-gbc4 integrand (k = 4)
  double max_mean_curvature = 0.0, max_traceless = 0.0, max_weyl = 0.0;
  std::vector<std::string> warnings;
};

// Sample points of the graph chart inside |y| < R.
inline std::vector<std::vector<double>> interior_points(const HyperbolicModel& m) {
  const double r = m.R;
  std::vector<std::vector<double>> pts;
  const std::vector<std::vector<double>> base{{0.0, 0.0, 0.0, 0.0}, {0.3, 0.1, -0.2, 0.05}, {-0.5, 0.2, 0.1, 0.3},
                                              {0.1, -0.6, 0.25, -0.1}, {0.45, 0.45, -0.3, 0.2}};
  for (const auto& b : base) {
    std::vector<double> y;
    for (int a = 0; a < m.k; ++a) y.push_back(b[a] * r);
    pts.push_back(y);
  }
  return pts;
}

// Fitted renormalized area against c_k chi with chi(B^k) = 1, plus the
// pointwise vanishing of the Weyl-type integrand on the model.
inline RenormGBReport renorm_gb_check(const HyperbolicModel& m, const TruncationFit& fit) {
  if (!m.totally_geodesic) throw UsageError("renorm_gb_check: model must be totally geodesic");
  RenormGBReport r;
  r.renormalized_area = fit.renormalized_area;
  r.expected = renormalized_gb_constant(m.k) * r.chi;
  r.residual = std::abs(r.renormalized_area - r.expected);
  r.warnings = fit.warnings;
  for (const auto& y : interior_points(m)) {
    const Scene sc{"hemisphere", m.g, m.graph, y, {}};
    const auto p = sc.pack<double>();
    const InvariantEvaluator<double> e(p);
    r.max_integrand = std::max(r.max_integrand, std::abs(m.k == 2 ? e.W_Q() : minimal_gbc4_integrand(e)));
    r.max_mean_curvature = std::max(r.max_mean_curvature, max_abs(at(p.H)));
    r.max_traceless = std::max(r.max_traceless, max_abs(at(p.Lo)));
    r.max_weyl = std::max(r.max_weyl, max_abs(at(p.weyl)));
  }
  return r;
}

inline RenormGBReport renorm_gb_check(const HyperbolicModel& m) { return renorm_gb_check(m, fit_renormalized_area(m)); }

}  // namespace qgeo

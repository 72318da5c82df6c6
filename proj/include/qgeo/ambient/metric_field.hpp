#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qgeo/tensor/labeled_tensor.hpp"

namespace qgeo {

using JetD = Jet<double>;
using JetVec = std::vector<JetD>;
using JetMat = std::vector<std::vector<JetD>>;

// Evaluable scalar field on a chart, differentiated by evaluating on jets.
struct ScalarField {
  int dim = 0;
  std::function<JetD(const JetVec&)> f;
  std::string name;

  JetD jet(const std::vector<double>& x0, int order) const {
    if (static_cast<int>(x0.size()) != dim) throw UsageError("scalar field: point dimension mismatch");
    return jet_eval<double>(f, x0, order);
  }
  double operator()(const std::vector<double>& x0) const { return jet(x0, 0).value(); }
};

// Symmetric positive definite metric components g_ab(x) on an n-dimensional chart.
struct MetricField {
  int dim = 0;
  std::function<JetMat(const JetVec&)> g;
  std::string name;

  // Metric components as jets about x0, both slots ambient-down.
  LabeledTensor<JetD> jet(const std::vector<double>& x0, int order) const {
    if (static_cast<int>(x0.size()) != dim) throw UsageError("metric: point dimension mismatch");
    JetMat m = jet_eval<double>(g, x0, order);
    if (static_cast<int>(m.size()) != dim) throw UsageError("metric: component count mismatch");
    const Slot s{Kind::ambient, Var::down, dim};
    LabeledTensor<JetD> t({s, s});
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) {
        if (m[a].size() != static_cast<std::size_t>(dim)) throw UsageError("metric: component count mismatch");
        t(a, b) = (m[a][b] + m[b][a]) * 0.5;
      }
    return t;
  }

  LabeledTensor<double> value(const std::vector<double>& x0) const { return values(jet(x0, 0)); }
};

// g multiplied by exp(2 t u) with t a real or nilpotent parameter; jets promoted to S.
template <class S>
LabeledTensor<Jet<S>> rescaled_metric_jet(const MetricField& g, const ScalarField* u, const S& t,
                                          const std::vector<double>& x0, int order) {
  auto gj = g.jet(x0, order);
  auto r = map_elements(gj, [](const JetD& j) { return promote<S>(j); });
  if (!u) return r;
  Jet<S> factor = exp(promote<S>(u->jet(x0, order)) * Jet<S>(t * 2.0));
  for (auto& x : r.data()) x = x * factor;
  return r;
}

}  // namespace qgeo

#pragma once

#include <string>
#include <vector>

#include "qgeo/submanifold/pack.hpp"

namespace qgeo {

// An ambient metric, an immersed patch and a base point on it.
struct Scene {
  std::string name;
  MetricField g;
  Immersion patch;
  std::vector<double> y;
  PackOptions opt;

  int k() const { return patch.k; }
  int n() const { return patch.n; }
  std::vector<double> x() const { return patch.point(y); }

  // Pack for e^{2 t u} g; u == nullptr gives g itself.
  template <class S = double>
  SubmanifoldPack<S> pack(const ScalarField* u = nullptr, S t = S(0.0)) const {
    return build_pack<S>(rescaled_metric_jet<S>(g, u, t, x(), kMetricOrder), patch, y, opt);
  }
};

}  // namespace qgeo

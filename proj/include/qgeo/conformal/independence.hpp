#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "qgeo/ambient/catalog.hpp"
#include "qgeo/conformal/verifier.hpp"

namespace qgeo {

using FamilySample = std::array<double, 4>;  // (s, t, u, v)

inline const std::vector<FamilySample>& default_family_samples() {
  static const std::vector<FamilySample> s{
      {1.0, 1.0, 1.0, 1.0}, {0.5, -1.0, 0.3, 2.0}, {-1.0, 0.7, 1.5, -0.4}, {0.2, 0.4, -1.0, 0.8}};
  return s;
}

// The slice point where L vanishes and a second point where Lo does not.
inline const std::vector<std::vector<double>>& default_family_points() {
  static const std::vector<std::vector<double>> p{{0.0, 0.0, 0.0, 0.0}, {0.2, -0.1, 0.15, 0.1}};
  return p;
}

struct GramWitness {
  int n = 0;
  std::vector<std::string> tensor_names, scalar_names;
  double tensor_det = 0.0;  // Gram determinant of the normalized flattened tensors
  double scalar_det = 0.0;
  std::vector<double> tensor_norms, scalar_norms;
};

namespace detail {

inline double normalized_gram_det(std::vector<std::vector<double>> v, std::vector<double>& norms) {
  const int m = static_cast<int>(v.size());
  norms.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    double s = 0;
    for (double x : v[i]) s += x * x;
    norms[i] = std::sqrt(s);
    if (norms[i] > 0)
      for (double& x : v[i]) x /= norms[i];
  }
  Eigen::MatrixXd G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double s = 0;
      for (std::size_t q = 0; q < v[i].size(); ++q) s += v[i][q] * v[j][q];
      G(i, j) = s;
    }
  return G.determinant();
}

inline void append(std::vector<double>& out, const LabeledTensor<double>& t) {
  for (std::size_t i = 0; i < t.size(); ++i) out.push_back(t[i]);
}

}  // namespace detail

// Gram determinants for the tensor set {F, Lo^2, |Lo|^2 g, (G g)} and the
// divergence scalars built on Lo and W, on the 4-dimensional slice of the
// diagonal exponential family. Each quantity is flattened over all samples
// and points before the Gram matrix is formed.
inline GramWitness linear_independence_witness(int n, const std::vector<FamilySample>& samples = default_family_samples(),
                                               const std::vector<std::vector<double>>& points = default_family_points()) {
  if (n < 5) throw DomainError("independence witness needs n >= 5");
  GramWitness w;
  w.n = n;
  const bool big = n >= 6;
  w.tensor_names = {"F", "Lo^2", "|Lo|^2 g"};
  if (big) w.tensor_names.push_back("G g");
  w.scalar_names = {"div(Lo W)"};
  if (big) w.scalar_names.push_back("div(Lo W trace)");
  std::vector<std::vector<double>> tv(w.tensor_names.size()), sv(w.scalar_names.size());
  for (const auto& s : samples)
    for (const auto& y : points) {
      Scene sc{"independence", metrics::independence_family(n, s[0], s[1], s[2], s[3]), patches::affine(4, n), y, {}};
      const auto p = sc.pack<double>();
      const auto c = conformal_tensors(p);
      const auto delta = tangent_delta<double>(4);
      detail::append(tv[0], at(*c.F));
      detail::append(tv[1], at(c.Lo2));
      detail::append(tv[2], at(times(delta, c.Lo_sq)));
      if (big) detail::append(tv[3], at(times(delta, *c.G)));
      const JT<double> Wtttn = blk(p.weyl, "tttn", 4);
      sv[0].push_back(div_bar(p, einsum("bcA,abcA->a", p.Lo, Wtttn)).value());
      if (big) sv[1].push_back(div_bar(p, einsum("abA,bA->a", p.Lo, c.W_tnt)).value());
    }
  w.tensor_det = detail::normalized_gram_det(tv, w.tensor_norms);
  w.scalar_det = detail::normalized_gram_det(sv, w.scalar_norms);
  return w;
}

}  // namespace qgeo

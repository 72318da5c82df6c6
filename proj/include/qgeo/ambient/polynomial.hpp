#pragma once

#include <random>
#include <vector>

#include "qgeo/tensor/jet.hpp"

namespace qgeo {

struct Monomial {
  double coef = 0.0;
  std::vector<int> pow;
};

// Sparse polynomial in a fixed number of variables.
struct Polynomial {
  int nvars = 0;
  std::vector<Monomial> terms;

  template <class T>
  T operator()(const std::vector<T>& x) const {
    T s = T(0.0);
    for (const auto& m : terms) {
      T t = T(m.coef);
      for (int v = 0; v < nvars; ++v)
        for (int p = 0; p < m.pow[v]; ++p) t = t * x[v];
      s = s + t;
    }
    return s;
  }

  double sup_bound_unit_box() const {
    double s = 0;
    for (const auto& m : terms) s += std::abs(m.coef);
    return s;
  }
};

// Random polynomial with `count` monomials of degree in [dmin, dmax], coefficients
// uniform in [-amp, amp], rescaled so its sup over the unit box is at most amp.
inline Polynomial random_polynomial(std::mt19937_64& rng, int nvars, int count, int dmin, int dmax, double amp) {
  std::uniform_real_distribution<double> U(-amp, amp);
  std::uniform_int_distribution<int> D(dmin, dmax), V(0, nvars - 1);
  Polynomial p{nvars, {}};
  for (int i = 0; i < count; ++i) {
    Monomial m{U(rng), std::vector<int>(nvars, 0)};
    const int d = D(rng);
    for (int j = 0; j < d; ++j) m.pow[V(rng)]++;
    p.terms.push_back(m);
  }
  const double s = p.sup_bound_unit_box();
  if (s > amp)
    for (auto& m : p.terms) m.coef *= amp / s;
  return p;
}

}  // namespace qgeo

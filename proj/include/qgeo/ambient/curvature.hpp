#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgeo/ambient/metric_field.hpp"

namespace qgeo {

template <class S> using JT = LabeledTensor<Jet<S>>;

inline Slot amb_down(int n) { return {Kind::ambient, Var::down, n}; }
inline Slot amb_up(int n) { return {Kind::ambient, Var::up, n}; }

inline std::string letters(int first, int count) {
  std::string s;
  for (int i = 0; i < count; ++i) s += static_cast<char>('a' + first + i);
  return s;
}

// Inverse of a small dense matrix of scalars (Gauss-Jordan, partial pivoting).
template <class S>
std::vector<S> invert_values(std::vector<S> a, int n) {
  std::vector<S> inv(n * n, S(0.0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = S(1.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(value_of(a[r * n + c])) > std::abs(value_of(a[piv * n + c]))) piv = r;
    if (std::abs(value_of(a[piv * n + c])) < 1e-300) throw NumericError("singular matrix");
    for (int j = 0; j < n; ++j) {
      std::swap(a[c * n + j], a[piv * n + j]);
      std::swap(inv[c * n + j], inv[piv * n + j]);
    }
    const S d = S(1.0) / a[c * n + c];
    for (int j = 0; j < n; ++j) {
      a[c * n + j] *= d;
      inv[c * n + j] *= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const S f = a[r * n + c];
      if (value_of(f) == 0.0 && eps_of(f) == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a[r * n + j] -= f * a[c * n + j];
        inv[r * n + j] -= f * inv[c * n + j];
      }
    }
  }
  return inv;
}

// Positive definiteness of the value matrix via Cholesky.
inline bool is_positive_definite(const std::vector<double>& a, int n) {
  std::vector<double> l(n * n, 0.0);
  for (int j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (int k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > 0.0)) return false;
    l[j * n + j] = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / l[j * n + j];
    }
  }
  return true;
}

// Inverse of a symmetric matrix of jets by the Neumann series about its value.
template <class S>
JT<S> inverse_metric(const JT<S>& g) {
  const int n = g.dim(0);
  std::vector<S> g0(n * n);
  std::vector<double> gv(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      g0[a * n + b] = g(a, b).value();
      gv[a * n + b] = value_of(g0[a * n + b]);
    }
  if (!is_positive_definite(gv, n)) throw NumericError("metric is not positive definite");
  const auto a0v = invert_values(g0, n);
  const Slot u{g.slot(0).kind, Var::up, n};
  JT<S> a0({u, u}), delta(g.slots());
  int ord = Jet<S>::kExact;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      a0(a, b) = Jet<S>(a0v[a * n + b]);
      delta(a, b) = g(a, b) - Jet<S>(g0[a * n + b]);
      ord = std::min(ord, g(a, b).order());
    }
  JT<S> sum = a0, term = a0;
  // (g0 + d)^{-1} = sum_j (-A0 d)^j A0, and (A0 d)^j vanishes below degree j.
  const int terms = (ord == Jet<S>::kExact) ? 0 : ord;
  auto a0d = einsum("ab,bc->ac", a0, delta);
  a0d *= -1.0;
  for (int j = 1; j <= terms; ++j) {
    term = einsum("ab,bc->ac", a0d, term);
    sum += term;
  }
  return sum;
}

// Coordinate partial derivatives: result slot 0 is the derivative index.
template <class S>
JT<S> partials(const JT<S>& t, int n, Kind kind = Kind::ambient) {
  std::vector<Slot> sl = {{kind, Var::down, n}};
  sl.insert(sl.end(), t.slots().begin(), t.slots().end());
  JT<S> r(sl);
  for (int e = 0; e < n; ++e)
    for (std::size_t i = 0; i < t.size(); ++i) r[e * t.size() + i] = t[i].derivative(e);
  return r;
}

// Gamma(c, a, b) = Gamma^c_{ab}.
template <class S>
JT<S> christoffel(const JT<S>& g, const JT<S>& ginv) {
  const int n = g.dim(0);
  const Kind kd = g.slot(0).kind;
  const Slot dn{kd, Var::down, n};
  auto dg = partials(g, n, kd);  // dg(c, a, b) = d_c g_ab
  JT<S> lower({dn, dn, dn});  // Gamma_{dab}
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) lower(d, a, b) = (dg(a, d, b) + dg(b, d, a) - dg(d, a, b)) * 0.5;
  auto r = einsum("cd,dab->cab", ginv, lower);
  auto sl = r.slots();
  sl[0] = Slot{kd, Var::up, n};
  return r.relabeled(sl);
}

// Levi-Civita derivative of an all-lower tensor: (nabla T)_{e a1..ar}.
template <class S>
JT<S> cov_deriv(const JT<S>& t, const JT<S>& gamma) {
  JT<S> r = partials(t, gamma.dim(0), gamma.slot(0).kind);
  const int rank = t.rank();
  const std::string tl = letters(0, rank);  // a b c ...
  for (int s = 0; s < rank; ++s) {
    std::string ti = tl;
    ti[s] = 'y';
    // Gamma^y_{z a_s} T_{.. y ..}
    const std::string spec = std::string("y") + "z" + tl[s] + "," + ti + "->z" + tl;
    r -= einsum(spec, gamma, t);
  }
  return r;
}

struct CurvatureDepth {
  bool cotton = true;  // C and nabla P (metric order 3)
  bool bach = true;    // B (metric order 4)
  bool dweyl = true;   // nabla W (metric order 3)
  bool ddweyl = false; // nabla nabla W (metric order 4)
  bool dj = true;      // nabla J, nabla nabla J
  bool dcotton = false;
};

// All curvature objects of a metric jet, in coordinates, all indices down.
// Sign conventions: (nabla_a nabla_b - nabla_b nabla_a) tau_c = R_abc^d tau_d,
// Ric_ab = R_acb^c, P = (Ric - J g)/(n-2), J = R/(2(n-1)),
// W = R - P wedge g, C_abc = nabla_a P_bc - nabla_b P_ac,
// B_ab = nabla^c C_cab + W_acbd P^cd.
template <class S>
struct CurvaturePack {
  int n = 0;
  JT<S> g, ginv, gamma, rm, ric, scal, schouten, j, weyl;
  std::optional<JT<S>> dschouten, cotton, dcotton, bach, dweyl, ddweyl, dj, ddj;
};

template <class S>
CurvaturePack<S> curvature_pack(const JT<S>& g, const CurvatureDepth& depth = {}) {
  CurvaturePack<S> cp;
  const int n = g.dim(0);
  cp.n = n;
  const Slot dn{g.slot(0).kind, Var::down, n};
  cp.g = g;
  cp.ginv = inverse_metric(g);
  cp.gamma = christoffel(g, cp.ginv);
  const auto& G = cp.gamma;
  auto dG = partials(G, n, dn.kind);  // dG(a, d, b, c) = d_a Gamma^d_bc
  // R_abc^d = -d_a G^d_bc + d_b G^d_ac + G^e_ac G^d_be - G^e_bc G^d_ae
  JT<S> rup = einsum("bdac->abcd", dG) - einsum("adbc->abcd", dG);
  rup += einsum("eac,dbe->abcd", G, G);
  rup -= einsum("ebc,dae->abcd", G, G);
  cp.rm = einsum("abce,ed->abcd", rup, g);
  cp.ric = einsum("acbd,cd->ab", cp.rm, cp.ginv);
  cp.scal = einsum("ab,ab->", cp.ric, cp.ginv);
  const Jet<S> R = cp.scal[0];
  if (n >= 2) cp.j = scalar_tensor(R * (1.0 / (2.0 * (n - 1))));
  if (n < 3) {
    // Schouten and Weyl need n >= 3; surfaces only carry R, Ric and J.
    cp.schouten = JT<S>({dn, dn});
    cp.weyl = JT<S>({dn, dn, dn, dn});
    return cp;
  }
  const Jet<S> J = cp.j[0];
  cp.schouten = (cp.ric - times(g, J)) * (1.0 / (n - 2));
  const auto& P = cp.schouten;
  JT<S> pg = einsum("ac,bd->abcd", P, g);
  JT<S> wedge = pg + einsum("badc->abcd", pg) - einsum("abdc->abcd", pg) - einsum("bacd->abcd", pg);
  // W = R - P_ac g_bd - P_bd g_ac + P_ad g_bc + P_bc g_ad
  cp.weyl = cp.rm - wedge;
  if (depth.cotton || depth.bach || depth.dcotton) {
    cp.dschouten = cov_deriv(P, G);
    cp.cotton = *cp.dschouten - einsum("bac->abc", *cp.dschouten);
  }
  if (depth.bach || depth.dcotton) {
    cp.dcotton = cov_deriv(*cp.cotton, G);  // (d, c, a, b)
  }
  if (depth.bach) {
    JT<S> divc = einsum("dcab,dc->ab", *cp.dcotton, cp.ginv);
    JT<S> pup = einsum("ce,ef,fd->cd", cp.ginv, P, cp.ginv);
    cp.bach = divc + einsum("acbd,cd->ab", cp.weyl, pup);
  }
  if (depth.dweyl || depth.ddweyl) cp.dweyl = cov_deriv(cp.weyl, G);
  if (depth.ddweyl) cp.ddweyl = cov_deriv(*cp.dweyl, G);
  if (depth.dj) {
    cp.dj = cov_deriv(cp.j, G);
    cp.ddj = cov_deriv(*cp.dj, G);
  }
  return cp;
}

// Order of the metric jet each depth needs.
inline int metric_order_for(const CurvatureDepth& d) {
  if (d.bach || d.ddweyl || d.dcotton || d.dj) return 4;
  if (d.cotton || d.dweyl) return 3;
  return 2;
}

}  // namespace qgeo

#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qgeo/ambient/curvature.hpp"
#include "qgeo/submanifold/immersion.hpp"

namespace qgeo {

inline Slot tan_slot(int k) { return {Kind::tangent, Var::down, k}; }
inline Slot nor_slot(int m) { return {Kind::normal, Var::down, m}; }

struct PackOptions {
  bool ddweyl = false;  // project nabla nabla W (needs the full metric budget)
  // Row-major n x n orthogonal matrix whose rows replace the coordinate vectors
  // as normal-frame seeds.
  std::vector<double> seed_rotation;
};

// Jets order used along the patch: map to order 5, metric (hence gY) to order 4.
constexpr int kMapOrder = 5;
constexpr int kMetricOrder = 4;

// Everything needed at a point of an immersed patch. Tangent and normal
// objects are expressed in an adapted orthonormal frame F_I (I < k tangent,
// I >= k normal) and are jets in the chart variables of the patch.
template <class S>
struct SubmanifoldPack {
  using scalar_type = S;
  int k = 0, n = 0;
  std::vector<double> y0, x0;
  CurvaturePack<S> amb;  // ambient curvature as jets in the ambient chart
  JT<S> gY;              // g along the patch, coordinate components
  JT<S> e;               // e(alpha, a) = d x^a / d y^alpha
  JT<S> frame;           // frame(I, a): adapted ON frame, ambient coordinate components
  JT<S> coframe;         // coframe(I, a) = g_ab frame(I, b)
  JT<S> U;               // U(i, alpha): E_i = U(i, alpha) e_alpha
  JT<S> omega;           // omega(i, I, J) = g(nabla_{E_i} F_I, F_J)
  JT<S> omega_bar;       // block-diagonal part: tangential and normal connections
  JT<S> L, H, Lo;        // (t, t, n), (n), (t, t, n)
  // Ambient curvature restricted to the patch, every slot in the adapted frame.
  JT<S> rm, ric, schouten, j, weyl, cotton, bach, dschouten, dweyl, dj, ddj;
  std::optional<JT<S>> ddweyl;
  // Intrinsic geometry of the induced metric (tangent slots, ON frame).
  CurvaturePack<S> intr;  // in patch coordinates
  JT<S> rm_bar, ric_bar, schouten_bar, j_bar, weyl_bar;
  std::vector<int> normal_seed_order;
};

namespace detail {

template <class S>
Jet<S> inner(const JT<S>& g, const std::vector<Jet<S>>& u, const std::vector<Jet<S>>& v) {
  const int n = g.dim(0);
  Jet<S> r;
  for (int a = 0; a < n; ++a) {
    Jet<S> gv;
    for (int b = 0; b < n; ++b) gv.add_product(g(a, b), v[b]);
    r.add_product(u[a], gv);
  }
  return r;
}

template <class S>
JT<S> compose_tensor(const Composer& comp, const JT<S>& t) {
  return map_elements(t, [&](const Jet<S>& x) { return comp(x); });
}

// Contract every slot of an all-lower ambient coordinate tensor with the frame.
template <class S>
JT<S> to_frame(const JT<S>& t, const JT<S>& frame) {
  JT<S> cur = t;
  const int r = t.rank();
  for (int s = 0; s < r; ++s) {
    std::string in = letters(0, r), out = in;
    in[s] = 'z';
    out[s] = 'Y';
    cur = einsum("Yz," + in + "->" + out, frame, cur);
  }
  return cur;
}

}  // namespace detail

// E_i(T): directional derivatives along the tangent frame; new leading tangent slot.
template <class S>
JT<S> frame_derivative(const SubmanifoldPack<S>& p, const JT<S>& t) {
  std::vector<Slot> sl = {tan_slot(p.k)};
  sl.insert(sl.end(), t.slots().begin(), t.slots().end());
  JT<S> d(sl);
  for (int a = 0; a < p.k; ++a)
    for (std::size_t i = 0; i < t.size(); ++i) d[a * t.size() + i] = t[i].derivative(a);
  std::string tl = letters(0, t.rank());
  return einsum("iz,z" + tl + "->i" + tl, p.U, d);
}

namespace detail {

template <class S>
JT<S> connection_block(const JT<S>& om, Kind kind, int k) {
  if (kind == Kind::ambient) return om;
  return block(om, {Kind::tangent, kind, kind}, k);
}

template <class S>
JT<S> covariant(const SubmanifoldPack<S>& p, const JT<S>& t, const JT<S>& om) {
  JT<S> r = frame_derivative(p, t);
  const int rank = t.rank();
  const std::string tl = letters(0, rank);
  for (int s = 0; s < rank; ++s) {
    JT<S> c = connection_block(om, t.slot(s).kind, p.k);
    std::string ti = tl;
    ti[s] = 'Y';
    r -= einsum(std::string("i") + tl[s] + "Y," + ti + "->i" + tl, c, t);
  }
  return r;
}

}  // namespace detail

// Tangential covariant derivative: induced connection on tangent parts, normal
// connection on normal parts (ambient slots are split accordingly).
template <class S>
JT<S> cov_bar(const SubmanifoldPack<S>& p, const JT<S>& t) {
  return detail::covariant(p, t, p.omega_bar);
}

// Ambient Levi-Civita derivative along the patch (slots should be ambient).
template <class S>
JT<S> cov_along(const SubmanifoldPack<S>& p, const JT<S>& t) {
  return detail::covariant(p, t, p.omega);
}

// Restriction of an ambient coordinate tensor (all lower) to the patch, in the adapted frame.
template <class S>
JT<S> project_ambient(const SubmanifoldPack<S>& p, const Composer& comp, const JT<S>& t) {
  return detail::to_frame(detail::compose_tensor(comp, t), p.frame);
}

template <class S>
SubmanifoldPack<S> build_pack(const JT<S>& gx, const Immersion& patch, const std::vector<double>& y0,
                              const PackOptions& opt = {}) {
  SubmanifoldPack<S> p;
  const int k = patch.k, n = patch.n;
  if (k < 1 || k >= n) throw ConfigError("patch: need 1 <= k < n");
  if (gx.dim(0) != n) throw ConfigError("patch: metric dimension differs from patch codimension data");
  p.k = k;
  p.n = n;
  p.y0 = y0;
  const JetVec xj = patch.jet(y0, kMapOrder);
  for (const auto& x : xj) p.x0.push_back(x.value());
  CurvatureDepth depth;
  depth.ddweyl = opt.ddweyl;
  p.amb = curvature_pack<S>(gx, depth);
  JetVec du;
  for (int a = 0; a < n; ++a) du.push_back(xj[a] - p.x0[a]);
  const JetSpace* xs = nullptr;
  for (const auto& x : gx.data())
    if (x.space()) xs = x.space();
  const JetSpace& xspace = xs ? *xs : JetSpace::get(n, kMetricOrder);
  Composer comp(xspace, std::min(kMetricOrder, xspace.order()), du);

  p.gY = detail::compose_tensor(comp, gx);
  JT<S> gammaY = detail::compose_tensor(comp, p.amb.gamma);
  p.e = JT<S>({tan_slot(k), amb_down(n)});
  for (int al = 0; al < k; ++al)
    for (int a = 0; a < n; ++a) p.e(al, a) = promote<S>(xj[a].derivative(al));

  // Tangent frame by Gram-Schmidt in patch coordinates.
  p.U = JT<S>({tan_slot(k), tan_slot(k)});
  std::vector<std::vector<Jet<S>>> E(k, std::vector<Jet<S>>(n));
  for (int i = 0; i < k; ++i) {
    std::vector<Jet<S>> w(n);
    std::vector<Jet<S>> coef(k, Jet<S>(0.0));
    coef[i] = Jet<S>(1.0);
    for (int a = 0; a < n; ++a) w[a] = p.e(i, a);
    for (int j = 0; j < i; ++j) {
      std::vector<Jet<S>> ei(n);
      for (int a = 0; a < n; ++a) ei[a] = p.e(i, a);
      Jet<S> c = detail::inner(p.gY, ei, E[j]);
      for (int a = 0; a < n; ++a) w[a] -= c * E[j][a];
      for (int al = 0; al < k; ++al) coef[al] -= c * p.U(j, al);
    }
    Jet<S> nn = detail::inner(p.gY, w, w);
    if (!(value_of(nn.value()) > 1e-24)) throw NumericError("patch: differential is rank deficient");
    Jet<S> inv = reciprocal(sqrt(nn));
    for (int a = 0; a < n; ++a) E[i][a] = w[a] * inv;
    for (int al = 0; al < k; ++al) p.U(i, al) = coef[al] * inv;
  }

  // Normal frame: seeds ordered by the size of their normal projection at the base point.
  auto seed = [&](int r) {
    std::vector<Jet<S>> s(n);
    for (int a = 0; a < n; ++a) {
      double v = (a == r) ? 1.0 : 0.0;
      if (!opt.seed_rotation.empty()) v = opt.seed_rotation[r * n + a];
      s[a] = Jet<S>(v);
    }
    return s;
  };
  auto normal_part = [&](std::vector<Jet<S>> s, const std::vector<std::vector<Jet<S>>>& basis) {
    for (const auto& b : basis) {
      Jet<S> c = detail::inner(p.gY, s, b);
      for (int a = 0; a < n; ++a) s[a] -= c * b[a];
    }
    return s;
  };
  std::vector<double> pnorm(n);
  for (int r = 0; r < n; ++r) {
    auto w = normal_part(seed(r), E);
    pnorm[r] = std::sqrt(std::max(0.0, value_of(detail::inner(p.gY, w, w).value())));
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return pnorm[a] > pnorm[b]; });
  std::vector<std::vector<Jet<S>>> all = E;
  for (int r : order) {
    if (static_cast<int>(all.size()) == n) break;
    auto w = normal_part(seed(r), all);
    Jet<S> nn = detail::inner(p.gY, w, w);
    if (!(value_of(nn.value()) > 1e-12)) continue;
    Jet<S> inv = reciprocal(sqrt(nn));
    for (auto& x : w) x = x * inv;
    all.push_back(w);
    p.normal_seed_order.push_back(r);
  }
  if (static_cast<int>(all.size()) != n) throw NumericError("patch: could not complete the normal frame");
  p.frame = JT<S>({amb_down(n), amb_down(n)});
  for (int I = 0; I < n; ++I)
    for (int a = 0; a < n; ++a) p.frame(I, a) = all[I][a];
  p.coframe = einsum("Ib,ab->Ia", p.frame, p.gY);

  // Connection coefficients omega(i, I, J) = g(nabla_{E_i} F_I, F_J).
  JT<S> Et = block(p.frame, {Kind::tangent, Kind::ambient}, k);  // E_i^a
  JT<S> dF = frame_derivative(p, p.frame);                         // (i, I, a)
  dF += einsum("abc,ib,Ic->iIa", gammaY, Et, p.frame);
  p.omega = einsum("iIa,Ja->iIJ", dF, p.coframe);
  p.omega_bar = p.omega;
  for (int i = 0; i < k; ++i)
    for (int I = 0; I < n; ++I)
      for (int J = 0; J < n; ++J)
        if ((I < k) != (J < k)) p.omega_bar(i, I, J) = Jet<S>(0.0);
  p.L = block(p.omega, {Kind::tangent, Kind::tangent, Kind::normal}, k);
  JT<S> trL = einsum("iiA->A", p.L);
  p.H = trL * (1.0 / k);
  p.Lo = p.L;
  for (int i = 0; i < k; ++i)
    for (int A = 0; A < n - k; ++A) p.Lo(i, i, A) -= p.H(A);

  // Ambient curvature along the patch.
  p.rm = project_ambient(p, comp, p.amb.rm);
  p.ric = project_ambient(p, comp, p.amb.ric);
  p.schouten = project_ambient(p, comp, p.amb.schouten);
  p.j = detail::compose_tensor(comp, p.amb.j);
  p.weyl = project_ambient(p, comp, p.amb.weyl);
  p.cotton = project_ambient(p, comp, *p.amb.cotton);
  p.bach = project_ambient(p, comp, *p.amb.bach);
  p.dschouten = project_ambient(p, comp, *p.amb.dschouten);
  p.dweyl = project_ambient(p, comp, *p.amb.dweyl);
  p.dj = project_ambient(p, comp, *p.amb.dj);
  p.ddj = project_ambient(p, comp, *p.amb.ddj);
  if (opt.ddweyl) p.ddweyl = project_ambient(p, comp, *p.amb.ddweyl);

  // Intrinsic curvature of the induced metric from its own jets.
  JT<S> h = einsum("ia,ab,jb->ij", p.e, p.gY, p.e);
  CurvatureDepth none{false, false, false, false, false, false};
  p.intr = curvature_pack<S>(h, none);
  auto to_on = [&](const JT<S>& t) {
    JT<S> cur = t;
    const int r = t.rank();
    for (int s = 0; s < r; ++s) {
      std::string in = letters(0, r), out = in;
      in[s] = 'z';
      out[s] = 'Y';
      cur = einsum("Yz," + in + "->" + out, p.U, cur);
    }
    return cur;
  };
  p.rm_bar = to_on(p.intr.rm);
  p.ric_bar = to_on(p.intr.ric);
  p.schouten_bar = to_on(p.intr.schouten);
  p.j_bar = p.intr.j;
  p.weyl_bar = to_on(p.intr.weyl);
  return p;
}

// Values at the base point.
template <class S>
LabeledTensor<S> at(const JT<S>& t) {
  return values(t);
}

}  // namespace qgeo

#pragma once

#include <optional>
#include <string>

#include "qgeo/submanifold/pack.hpp"

namespace qgeo {

// Split ambient slots of a frame tensor by a pattern of 't' (tangent),
// 'n' (normal) and 'a' (leave ambient).
template <class V>
LabeledTensor<V> blk(const LabeledTensor<V>& t, const std::string& pattern, int k) {
  std::vector<Kind> kinds;
  for (char c : pattern) kinds.push_back(c == 't' ? Kind::tangent : c == 'n' ? Kind::normal : Kind::ambient);
  return block(t, kinds, k);
}

template <class S>
JT<S> tangent_delta(int k) {
  JT<S> d({tan_slot(k), tan_slot(k)});
  for (int i = 0; i < k; ++i) d(i, i) = Jet<S>(1.0);
  return d;
}

// Conformally natural tensors built from a submanifold pack.
template <class S>
struct ConformalTensors {
  int k = 0, n = 0;
  JT<S> Lo2;                  // Lo2(a, b) = Lo(a, c, A) Lo(b, c, A)
  Jet<S> Lo_sq;               // |Lo|^2
  JT<S> W_tt;                 // W(a, c, b, c)
  Jet<S> W_trace;             // W(a, b, a, b)
  JT<S> W_tnt;                // W(a, b, A, b), slots (t, n)
  Jet<S> H_sq;                // |H|^2
  std::optional<Jet<S>> G;    // k >= 2
  std::optional<JT<S>> F;     // k >= 3
  JT<S> dH;                   // nabla-bar H, (t, n)
  JT<S> D;                    // P(a, A) - dH(a, A)
  JT<S> mP;                   // (t, t)
  JT<S> mC;                   // all ambient
  JT<S> mCa;                  // mC(b, a, b), ambient slot
  JT<S> mB;                   // (t, t)
  JT<S> R_perp;               // normal curvature, (t, t, n, n)
};

// Curvature of the normal connection from the commutator of nabla-bar on
// the normal frame covectors.
template <class S>
JT<S> normal_curvature(const SubmanifoldPack<S>& p) {
  const int k = p.k, m = p.n - p.k;
  JT<S> R({tan_slot(k), tan_slot(k), nor_slot(m), nor_slot(m)});
  for (int B = 0; B < m; ++B) {
    JT<S> tau({nor_slot(m)});
    tau(B) = Jet<S>(1.0);
    JT<S> dd = cov_bar(p, cov_bar(p, tau));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int A = 0; A < m; ++A) R(a, b, A, B) = dd(a, b, A) - dd(b, a, A);
  }
  return R;
}

template <class S>
ConformalTensors<S> conformal_tensors(const SubmanifoldPack<S>& p) {
  ConformalTensors<S> c;
  const int k = p.k, n = p.n;
  c.k = k;
  c.n = n;
  const JT<S> delta = tangent_delta<S>(k);
  c.Lo2 = einsum("acA,bcA->ab", p.Lo, p.Lo);
  c.Lo_sq = einsum("aa->", c.Lo2)[0];
  c.W_tt = einsum("acbc->ab", blk(p.weyl, "tttt", k));
  c.W_trace = einsum("aa->", c.W_tt)[0];
  c.W_tnt = einsum("abAb->aA", blk(p.weyl, "ttnt", k));
  c.H_sq = einsum("A,A->", p.H, p.H)[0];
  if (k >= 2) c.G = (c.Lo_sq - c.W_trace) * (1.0 / (2.0 * (k - 1)));
  if (k >= 3) c.F = (c.Lo2 - c.W_tt - times(delta, *c.G)) * (1.0 / (k - 2));
  c.dH = cov_bar(p, p.H);
  c.D = blk(p.schouten, "tn", k) - c.dH;
  c.mP = blk(p.schouten, "tt", k) + einsum("A,abA->ab", p.H, p.Lo) + times(delta, c.H_sq * 0.5);
  c.mC = p.cotton - einsum("abcA,A->abc", blk(p.weyl, "aaan", k), p.H);
  c.mCa = einsum("bab->a", blk(c.mC, "tat", k));
  JT<S> Cn = blk(p.cotton, "ntt", k);
  c.mB = blk(p.bach, "tt", k) + einsum("A,Aab->ab", p.H, Cn + einsum("Aba->Aab", Cn)) * (n - 4.0) +
         einsum("A,B,aAbB->ab", p.H, p.H, blk(p.weyl, "tntn", k)) * (n - 4.0);
  c.R_perp = normal_curvature(p);
  return c;
}

}  // namespace qgeo

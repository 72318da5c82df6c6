#pragma once

#include <map>
#include <string>

#include "qgeo/submanifold/conformal_tensors.hpp"

namespace qgeo {

using ResidualRecord = std::map<std::string, double>;

// max|lhs - rhs| relative to 1 + the larger side.
inline double relative_residual(const LabeledTensor<double>& lhs, const LabeledTensor<double>& rhs) {
  return max_abs(lhs - rhs) / (1.0 + std::max(max_abs(lhs), max_abs(rhs)));
}

inline double relative_residual(double lhs, double rhs) {
  return std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
}

inline const JT<double>& fialkow(const ConformalTensors<double>& c) {
  if (!c.F) throw UsageError("Fialkow tensor needs k >= 3");
  return *c.F;
}

template <class S>
Jet<S> pfaffian_bar(const SubmanifoldPack<S>& p) {
  if (p.k == 2) return p.j_bar[0];
  if (p.k == 4) {
    Jet<S> w2 = einsum("abcd,abcd->", p.weyl_bar, p.weyl_bar)[0];
    Jet<S> p2 = einsum("ab,ab->", p.schouten_bar, p.schouten_bar)[0];
    Jet<S> j = p.j_bar[0];
    return (w2 * 0.25 - p2 * 2.0 + j * j * 2.0) * 0.5;
  }
  throw UsageError("Pfaffian is only provided for k = 2 and k = 4");
}

// Tangential derivative of a frame tensor obtained from the ambient derivative
// dT (slot order: derivative first) by adding the second fundamental form
// terms carried by the off-diagonal connection blocks. Slots stay ambient.
template <class S>
JT<S> cov_bar_from_ambient(const SubmanifoldPack<S>& p, const JT<S>& t, const JT<S>& dt) {
  JT<S> r = blk(dt, "t" + std::string(t.rank(), 'a'), p.k);
  JT<S> off = p.omega - p.omega_bar;
  const std::string tl = letters(0, t.rank());
  for (int s = 0; s < t.rank(); ++s) {
    std::string ti = tl;
    ti[s] = 'Y';
    r += einsum(std::string("i") + tl[s] + "Y," + ti + "->i" + tl, off, t);
  }
  return r;
}

inline ResidualRecord gauss_codazzi_residuals(const SubmanifoldPack<double>& p, const ConformalTensors<double>& c) {
  using T = LabeledTensor<double>;
  ResidualRecord out;
  const int k = p.k;
  const T Lo = at(p.Lo), L = at(p.L), H = at(p.H), W = at(p.weyl), P = at(p.schouten);
  const T delta = at(tangent_delta<double>(k));

  if (k >= 2) {
    T lhs = blk(at(p.rm), "tttt", k);
    T rhs = at(p.rm_bar) - einsum("acA,bdA->abcd", L, L) + einsum("adA,bcA->abcd", L, L);
    out["gauss"] = relative_residual(lhs, rhs);
  }
  if (k >= 3) {
    const T F = at(*c.F);
    T lhs = blk(W, "tttt", k);
    T rhs = at(p.weyl_bar) - einsum("acA,bdA->abcd", Lo, Lo) + einsum("adA,bcA->abcd", Lo, Lo) -
            einsum("ac,db->abcd", F, delta) + einsum("ad,cb->abcd", F, delta) +
            einsum("bc,da->abcd", F, delta) - einsum("bd,ca->abcd", F, delta);
    out["gcW"] = relative_residual(lhs, rhs);
    T lhsP = blk(P, "tt", k);
    T rhsP = at(p.schouten_bar) - einsum("A,abA->ab", H, Lo) - delta * (0.5 * c.H_sq.value()) + F;
    out["gcP"] = relative_residual(lhsP, rhsP);
  }
  if (k >= 2) {
    double rhs = p.j_bar[0].value() + einsum("AA->", blk(P, "nn", k))[0] - 0.5 * k * c.H_sq.value() + c.G->value();
    out["gcJ"] = relative_residual(p.j[0].value(), rhs);
  }
  const T D = at(c.D);
  const T dLo = at(cov_bar(p, p.Lo));  // (a, b, c, A) = nabla_a Lo_{bcA}
  {
    T lhs = blk(W, "ttnt", k);
    T rhs = einsum("abcA->abAc", dLo) - einsum("bacA->abAc", dLo) + einsum("ca,bA->abAc", delta, D) -
            einsum("cb,aA->abAc", delta, D);
    out["gcdL"] = relative_residual(lhs, rhs);
  }
  {
    T lhs = D * (k - 1.0);
    T rhs = (einsum("bbaA->aA", dLo) + at(c.W_tnt)) * -1.0;
    out["gcD"] = relative_residual(lhs, rhs);
  }
  {
    T lhs = blk(W, "ttnn", k);
    T rhs = at(c.R_perp) - einsum("caA,cbB->abAB", Lo, Lo) + einsum("caB,cbA->abAB", Lo, Lo);
    out["gcnc"] = relative_residual(lhs, rhs);
  }
  return out;
}

inline ResidualRecord divergence_identity_residuals(const SubmanifoldPack<double>& p,
                                                    const ConformalTensors<double>& c) {
  using T = LabeledTensor<double>;
  ResidualRecord out;
  const int k = p.k;
  const T Lo = at(p.Lo), D = at(c.D), W = at(p.weyl);
  const T Wtnt = at(c.W_tnt);
  const T Wtttn = blk(W, "tttn", k);
  // Lo^{bcA} W_{bacA}
  const T LW = einsum("bcA,bacA->a", Lo, Wtttn);
  {
    JT<double> trP = einsum("aa->", c.mP);
    T lhs = einsum("bab->a", at(cov_bar(p, c.mP)));
    T rhs = at(cov_bar(p, trP)) + blk(at(c.mCa), "t", k) - einsum("bA,baA->a", D, Lo);
    out["div-mP"] = relative_residual(lhs, rhs);
  }
  {
    T lhs = einsum("bab->a", at(cov_bar(p, c.Lo2)));
    T rhs = at(cov_bar(p, scalar_tensor(c.Lo_sq))) * 0.5 - einsum("bA,abA->a", D, Lo) * (k - 2.0) -
            einsum("bA,abA->a", Wtnt, Lo) - LW;
    out["div-tfss2"] = relative_residual(lhs, rhs);
  }
  {
    T lhs = einsum("bab->a", at(cov_bar(p, c.W_tt)));
    T rhs = at(cov_bar(p, scalar_tensor(c.W_trace))) * 0.5 - blk(at(c.mCa), "t", k) * (k - 2.0) - LW -
            einsum("abA,bA->a", Lo, Wtnt);
    out["div-W"] = relative_residual(lhs, rhs);
  }
  return out;
}

// <Lo, Laplacian Lo> against its expansion; needs 3 <= k < n.
inline double simons_residual(const SubmanifoldPack<double>& p, const ConformalTensors<double>& c) {
  using T = LabeledTensor<double>;
  const int k = p.k;
  if (k < 3) throw UsageError("Simons-type identity needs k >= 3");
  const T Lo = at(p.Lo), W = at(p.weyl), F = at(fialkow(c));
  const T lap = einsum("ddabA->abA", at(cov_bar(p, cov_bar(p, p.Lo))));
  const double lhs = einsum("abA,abA->", Lo, lap)[0];

  T rhs = einsum("abA->abA", at(cov_bar(p, c.D))) * (-1.0 * k);
  rhs -= at(cov_bar(p, c.W_tnt));
  rhs += einsum("ccaAb->abA", at(cov_bar(p, blk(p.weyl, "ttnt", k))));
  rhs += Lo * p.j_bar[0].value();
  rhs += einsum("ac,cbA->abA", at(p.schouten_bar), Lo) * static_cast<double>(k);
  rhs -= einsum("acbd,cdA->abA", blk(W, "tttt", k), Lo);
  rhs -= einsum("acAB,cbB->abA", blk(W, "ttnn", k), Lo);
  rhs += einsum("ac,cbA->abA", F, Lo) * 2.0;
  rhs -= einsum("abB,cdB,cdA->abA", Lo, Lo, Lo);
  rhs -= einsum("adA,cdB,cbB->abA", Lo, Lo, Lo);
  rhs += einsum("cdA,adB,bcB->abA", Lo, Lo, Lo) * 2.0;
  const double r = einsum("abA,abA->", Lo, rhs)[0];
  return relative_residual(lhs, r);
}

// For k = 2: W_{ab}^{ab} = -W_{aA}^{aA} = W_{AB}^{AB}.
inline ResidualRecord weyl_trace_residuals_k2(const SubmanifoldPack<double>& p) {
  if (p.k != 2) throw UsageError("Weyl trace relations are specific to k = 2");
  const auto W = at(p.weyl);
  const double tt = einsum("abab->", blk(W, "tttt", 2))[0];
  const double tn = einsum("aAaA->", blk(W, "tntn", 2))[0];
  const double nn = einsum("ABAB->", blk(W, "nnnn", 2))[0];
  return {{"tt+tn", relative_residual(tt, -tn)}, {"tt-nn", relative_residual(tt, nn)}};
}

}  // namespace qgeo

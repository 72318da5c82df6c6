#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qgeo/conformal/factor.hpp"
#include "qgeo/invariants/registry.hpp"
#include "qgeo/submanifold/checks.hpp"
#include "qgeo/submanifold/scene.hpp"

namespace qgeo {

// Homogeneity h of a quantity (all indices down, T(c^2 g) = c^h T(g)) and the
// density weight w of its argument when it is an operator.
struct DensityWeights {
  double h = 0.0;
  double w = 0.0;
};

struct LinearizationReport {
  std::string name;
  std::string method = "nilpotent-parameter";
  LabeledTensor<double> value;    // quantity at t = 0, adapted frame
  LabeledTensor<double> numeric;  // conformal linearization, nilpotent parameter
  std::optional<LabeledTensor<double>> central;
  std::optional<LabeledTensor<double>> analytic;
  double method_gap = 0.0;  // nilpotent vs central difference, relative
  double residual = 0.0;    // numeric vs analytic, relative
  bool inconsistent = false;
};

inline LabeledTensor<double> as_values(double s) { return scalar_tensor(s); }
inline LabeledTensor<Dual> as_values(const Dual& s) { return scalar_tensor(s); }
template <class S>
LabeledTensor<S> as_values(const Jet<S>& j) {
  return scalar_tensor(j.value());
}
template <class S>
LabeledTensor<S> as_values(const JT<S>& t) {
  return values(t);
}
inline LabeledTensor<double> as_values(const LabeledTensor<double>& t) { return t; }
inline LabeledTensor<Dual> as_values(const LabeledTensor<Dual>& t) { return t; }

inline LabeledTensor<double> real_values(const LabeledTensor<Dual>& t) {
  return map_elements(t, [](const Dual& d) { return d.v; });
}
inline LabeledTensor<double> eps_values(const LabeledTensor<Dual>& t) {
  return map_elements(t, [](const Dual& d) { return d.d; });
}

// A function of the ambient coordinates pulled back to the patch, as a jet in
// the patch variables (same variable set as the pack).
inline JetD restrict_to_patch(const ScalarField& f, const Scene& sc) {
  return jet_eval<double>([&](const JetVec& y) { return f.f(sc.patch.map(y)); }, sc.y, kMapOrder);
}

inline JetD patch_function(const Scene& sc, const std::function<JetD(const JetVec&)>& f) {
  return jet_eval<double>(f, sc.y, kMapOrder);
}

// Tangential gradient, divergence and Laplacian along the patch.
template <class S>
JT<S> grad_bar(const SubmanifoldPack<S>& p, const Jet<S>& f) {
  return cov_bar(p, scalar_tensor(f));
}
template <class S>
Jet<S> div_bar(const SubmanifoldPack<S>& p, const JT<S>& v) {
  return einsum("aa->", cov_bar(p, v))[0];
}
template <class S>
Jet<S> lap_bar(const SubmanifoldPack<S>& p, const Jet<S>& f) {
  return div_bar(p, grad_bar(p, f));
}

// Conformal factor data at the base point of an unrescaled pack.
struct FactorData {
  double u0 = 0.0;
  JetD uY;                          // restriction to the patch
  LabeledTensor<double> da;         // dU in the adapted frame (ambient slot)
  LabeledTensor<double> dt, dn;     // tangential and normal parts
  LabeledTensor<JetD> grad_t;       // tangential gradient along the patch
  LabeledTensor<double> hess_bar;   // intrinsic Hessian of the restriction
};

inline FactorData factor_data(const Scene& sc, const ConformalFactor& u, const SubmanifoldPack<double>& p) {
  FactorData d;
  const auto x = sc.x();
  const int n = sc.n(), k = sc.k();
  d.u0 = u(x);
  d.uY = restrict_to_patch(u.field, sc);
  const JetD j = u.field.jet(x, 1);
  d.da = LabeledTensor<double>({amb_down(n)});
  const auto F = at(p.frame);
  for (int I = 0; I < n; ++I)
    for (int a = 0; a < n; ++a) d.da(I) += F(I, a) * j.derivative(a).value();
  d.dt = blk(d.da, "t", k);
  d.dn = blk(d.da, "n", k);
  d.grad_t = grad_bar(p, d.uY);
  d.hess_bar = at(cov_bar(p, d.grad_t));
  return d;
}

// Conformal linearization of q at the base point. q(pack, conj) returns the
// quantity for the metric of the pack; operators apply themselves to their
// argument multiplied by conj = e^{t w U}. Tensors are compared in the
// adapted orthonormal frame, which rescales by e^{-t U}.
template <class Qty>
LinearizationReport linearize(const std::string& name, const Scene& sc, const ConformalFactor& u, Qty&& q,
                              DensityWeights wt = {}, bool central = true, double step = 1e-4) {
  const auto x = sc.x();
  u.verify_constraint(x);
  const double u0 = u(x);
  const JetD uY = restrict_to_patch(u.field, sc);
  LinearizationReport r;
  r.name = name;

  const auto pd = sc.pack<Dual>(&u.field, Dual(0.0, 1.0));
  const Jet<Dual> conj = exp(promote<Dual>(uY) * Jet<Dual>(Dual(0.0, wt.w)));
  const LabeledTensor<Dual> vd = as_values(q(pd, conj));
  const double shift = wt.w + wt.h - vd.rank();
  r.value = real_values(vd);
  r.numeric = eps_values(vd) - r.value * (shift * u0);

  if (central) {
    auto at_t = [&](double t) {
      const auto pt = sc.pack<double>(&u.field, t);
      const JetD c = exp(uY * (t * wt.w));
      return as_values(q(pt, c)) * std::exp(-t * shift * u0);
    };
    LabeledTensor<double> cd = (at_t(step) - at_t(-step)) * (0.5 / step);
    r.method_gap = relative_residual(r.numeric, cd);
    r.inconsistent = r.method_gap > 1e-5;
    r.central = cd;
    r.method = "nilpotent-parameter+central-difference";
  }
  return r;
}

inline LinearizationReport& with_analytic(LinearizationReport& r, const LabeledTensor<double>& a) {
  r.analytic = a;
  r.residual = relative_residual(r.numeric, a);
  return r;
}

// Basic transformation rules of the second fundamental form, mean curvature,
// Weyl tensor and tangential Laplacian.
inline std::vector<LinearizationReport> check_basic_linearizations(const Scene& sc, const ConformalFactor& u,
                                                                    double w = 0.5) {
  const auto p = sc.pack<double>();
  const auto fd = factor_data(sc, u, p);
  const int k = sc.k(), n = sc.n();
  std::vector<LinearizationReport> out;
  auto weyl = linearize("W", sc, u, [](const auto& q, const auto&) { return q.weyl; }, {2.0});
  out.push_back(with_analytic(weyl, LabeledTensor<double>(weyl.value.slots())));

  auto L = linearize("L", sc, u, [](const auto& q, const auto&) { return q.L; }, {2.0});
  LabeledTensor<double> La(L.value.slots());
  for (int a = 0; a < k; ++a)
    for (int A = 0; A < n - k; ++A) La(a, a, A) = -fd.dn(A);
  out.push_back(with_analytic(L, La));

  auto H = linearize("H", sc, u, [](const auto& q, const auto&) { return q.H; }, {0.0});
  out.push_back(with_analytic(H, fd.dn * -1.0));

  // Laplacian acting on a density of weight w.
  const JetD f = patch_function(sc, [](const JetVec& y) {
    JetD s = JetD(0.3);
    for (std::size_t i = 0; i < y.size(); ++i) s = s + y[i] * (0.5 + 0.25 * i) + y[i] * y[i] * (0.2 - 0.1 * i);
    return s;
  });
  auto lap = linearize(
      "Lap", sc, u,
      [&f](const auto& q, const auto& conj) {
        using S = typename std::decay_t<decltype(q)>::scalar_type;
        return lap_bar(q, promote<S>(f) * conj);
      },
      {-2.0, w});
  const double uf = f.value();
  const auto df = at(grad_bar(p, f));
  const double ua = einsum("a,a->", fd.dt, df)[0];
  const double lu = einsum("aa->", fd.hess_bar)[0];
  out.push_back(with_analytic(lap, scalar_tensor((k + 2.0 * w - 2.0) * ua + w * lu * uf)));

  // Tangential divergence of a fixed one-form (coordinate components).
  std::vector<JetD> tau;
  for (int a = 0; a < k; ++a)
    tau.push_back(patch_function(sc, [a](const JetVec& y) { return y[a] * y[a] * 0.7 + JetD(0.2 + 0.1 * a); }));
  auto dv = linearize(
      "div", sc, u,
      [&tau, k](const auto& q, const auto& conj) {
        using S = typename std::decay_t<decltype(q)>::scalar_type;
        JT<S> t({tan_slot(k)});
        for (int a = 0; a < k; ++a) t(a) = promote<S>(tau[a]) * conj;
        return div_bar(q, einsum("ia,a->i", q.U, t));
      },
      {-2.0, w});
  JT<double> t0({tan_slot(k)});
  for (int a = 0; a < k; ++a) t0(a) = tau[a];
  const auto ton = at(einsum("ia,a->i", p.U, t0));
  out.push_back(with_analytic(dv, scalar_tensor((k + w - 2.0) * einsum("a,a->", fd.dt, ton)[0])));
  return out;
}

// The five modified tensors whose linearization involves only tangential
// derivatives of the conformal factor.
inline std::vector<LinearizationReport> check_tangential_dependence(const Scene& sc, const ConformalFactor& u) {
  using T = LabeledTensor<double>;
  const auto p = sc.pack<double>();
  const auto fd = factor_data(sc, u, p);
  const auto c = conformal_tensors(p);
  const int k = sc.k(), n = sc.n();
  const T W = at(p.weyl), Lo = at(p.Lo), mC = at(c.mC);
  std::vector<LinearizationReport> out;

  auto mP = linearize("mP", sc, u, [](const auto& q, const auto&) { return conformal_tensors(q).mP; }, {0.0});
  out.push_back(with_analytic(mP, fd.hess_bar * -1.0));

  auto cC = linearize("mC", sc, u, [](const auto& q, const auto&) { return conformal_tensors(q).mC; }, {0.0});
  out.push_back(with_analytic(cC, einsum("abcd,d->abc", blk(W, "aaat", k), fd.dt) * -1.0));

  auto cCa = linearize("mC_trace", sc, u, [](const auto& q, const auto&) { return conformal_tensors(q).mCa; },
                       {-2.0});
  out.push_back(with_analytic(cCa, einsum("babc,c->a", blk(W, "tatt", k), fd.dt) * -1.0));

  auto mB = linearize("mB", sc, u, [](const auto& q, const auto&) { return conformal_tensors(q).mB; }, {-2.0});
  T Ct = blk(mC, "ttt", k);
  T sym = einsum("c,cab->ab", fd.dt, Ct) + einsum("c,cba->ab", fd.dt, Ct);
  out.push_back(with_analytic(mB, sym * (n - 4.0)));

  auto D = linearize("D", sc, u, [](const auto& q, const auto&) { return conformal_tensors(q).D; }, {0.0});
  out.push_back(with_analytic(D, einsum("b,baA->aA", fd.dt, Lo) * -1.0));
  return out;
}

// The seven linearizations used to separate the weight -4 candidates in the
// four-dimensional classification.
inline std::vector<LinearizationReport> check_step_table(const Scene& sc, const ConformalFactor& u) {
  if (sc.k() != 4) throw DomainError("linearization table is specific to k = 4");
  using T = LabeledTensor<double>;
  const auto p = sc.pack<double>();
  const auto fd = factor_data(sc, u, p);
  const auto c = conformal_tensors(p);
  const int k = 4;
  const DensityWeights w4{-4.0};
  const JT<double>& g = fd.grad_t;  // U_a along the patch
  std::vector<LinearizationReport> out;
  auto add = [&](LinearizationReport r, const JetD& a) { out.push_back(with_analytic(r, scalar_tensor(a.value()))); };

  add(linearize("Lap Jbar", sc, u, [](const auto& q, const auto&) { return lap_bar(q, q.j_bar[0]); }, w4),
      -lap_bar(p, lap_bar(p, fd.uY)) - div_bar(p, times(g, p.j_bar[0])) * 2.0);

  add(linearize("div div F", sc, u,
                [](const auto& q, const auto&) {
                  return einsum("abab->", cov_bar(q, cov_bar(q, *conformal_tensors(q).F)))[0];
                },
                w4),
      div_bar(p, einsum("ab,b->a", *c.F, g) * 2.0 - times(g, *c.G)));

  add(linearize("div (Lo D)", sc, u,
                [](const auto& q, const auto&) {
                  auto cq = conformal_tensors(q);
                  return div_bar(q, einsum("abA,bA->a", q.Lo, cq.D));
                },
                w4),
      -div_bar(p, einsum("ab,b->a", c.Lo2, g)));

  add(linearize("Lap |Lo|^2", sc, u,
                [](const auto& q, const auto&) { return lap_bar(q, conformal_tensors(q).Lo_sq); }, w4),
      -div_bar(p, times(g, c.Lo_sq)) * 2.0);

  add(linearize("Lap G", sc, u, [](const auto& q, const auto&) { return lap_bar(q, *conformal_tensors(q).G); }, w4),
      -div_bar(p, times(g, *c.G)) * 2.0);

  add(linearize("div (Lo W)", sc, u,
                [k](const auto& q, const auto&) {
                  return div_bar(q, einsum("bcA,bacA->a", q.Lo, blk(q.weyl, "tttn", k)));
                },
                w4),
      JetD(0.0));

  add(linearize("div (Lo W trace)", sc, u,
                [](const auto& q, const auto&) {
                  return div_bar(q, einsum("abA,bA->a", q.Lo, conformal_tensors(q).W_tnt));
                },
                w4),
      JetD(0.0));
  (void)T{};
  return out;
}

// Finite-t check e^{-w t U} I(e^{2tU} g) = I(g) and the weight-matched
// linearization for a registered invariant.
struct InvarianceReport {
  std::string name;
  double value = 0.0;
  std::vector<std::pair<double, double>> finite;  // (t, relative residual)
  double linearization = 0.0;                      // |I^.| / (1 + |I|)
  double max_residual() const {
    double m = linearization;
    for (auto [t, r] : finite) m = std::max(m, r);
    return m;
  }
};

inline InvarianceReport check_invariance(const InvariantInfo& info, const Scene& sc, const ConformalFactor& u,
                                         const std::vector<double>& ts = {0.1, -0.07}) {
  if (!info.defined_at(sc.k(), sc.n())) throw DomainError(info.name + " is not defined at this (k, n)");
  const double w = info.weight_for(sc.k());
  const double u0 = u(sc.x());
  InvarianceReport r;
  r.name = info.name;
  const auto p0 = sc.pack<double>();
  r.value = info.eval(InvariantEvaluator<double>(p0));
  for (double t : ts) {
    const auto pt = sc.pack<double>(&u.field, t);
    const double v = info.eval(InvariantEvaluator<double>(pt)) * std::exp(-w * t * u0);
    r.finite.push_back({t, relative_residual(v, r.value)});
  }
  auto lin = linearize(
      info.name, sc, u,
      [&info](const auto& q, const auto&) {
        using S = typename std::decay_t<decltype(q)>::scalar_type;
        if constexpr (std::is_same_v<S, Dual>)
          return info.eval_dual(InvariantEvaluator<Dual>(q));
        else
          return info.eval(InvariantEvaluator<double>(q));
      },
      {w}, false);
  r.linearization = std::abs(lin.numeric[0]) / (1.0 + std::abs(r.value));
  return r;
}

// Invariance of tensors that are not in the registry: Fialkow tensor, |Lo|^2
// and the normal curvature.
inline std::vector<LinearizationReport> check_tensor_invariance(const Scene& sc, const ConformalFactor& u) {
  std::vector<LinearizationReport> out;
  auto zero = [](LinearizationReport& r) { return with_analytic(r, LabeledTensor<double>(r.value.slots())); };
  if (sc.k() >= 3) {
    auto F = linearize("F", sc, u, [](const auto& q, const auto&) { return *conformal_tensors(q).F; }, {0.0});
    out.push_back(zero(F));
  }
  auto lo = linearize("|Lo|^2", sc, u, [](const auto& q, const auto&) { return conformal_tensors(q).Lo_sq; },
                      {-2.0});
  out.push_back(zero(lo));
  auto rp = linearize("R_perp", sc, u, [](const auto& q, const auto&) { return normal_curvature(q); }, {2.0});
  out.push_back(zero(rp));
  return out;
}

// Residual of e^{kU} Q(e^{2U} g) = Q(g) + P_k U for k = 2, 4.
struct QTransformationReport {
  double lhs = 0.0, q = 0.0, pk = 0.0;
  double residual = 0.0;
};

inline QTransformationReport check_Q_transformation(const Scene& sc, const ConformalFactor& u) {
  const int k = sc.k();
  if (k != 2 && k != 4) throw DomainError("Q transformation law is checked for k = 2 and k = 4");
  const auto p0 = sc.pack<double>();
  const auto p1 = sc.pack<double>(&u.field, 1.0);
  InvariantEvaluator<double> e0(p0), e1(p1);
  const JetD uY = restrict_to_patch(u.field, sc);
  QTransformationReport r;
  r.lhs = std::exp(k * uY.value()) * e1.Q();
  r.q = e0.Q();
  r.pk = (k == 2) ? e0.P2(uY) : e0.P4(uY);
  r.residual = relative_residual(r.lhs, r.q + r.pk);
  return r;
}

// Decides the sign of the first-order part of the intrinsic Paneitz operator
// from e^{4U} Qbar4(e^{2U} g) = Qbar4(g) + Pbar4 U on the given k = 4 scenes.
struct PaneitzCalibration {
  double sign = 0.0;  // 0 when neither sign satisfies the law
  double residual_plus = 0.0, residual_minus = 0.0;
};

inline PaneitzCalibration calibrate_paneitz(const std::vector<Scene>& scenes, const std::vector<ConformalFactor>& us,
                                            double tol = 1e-5) {
  PaneitzCalibration c;
  for (const auto& sc : scenes) {
    if (sc.k() != 4) throw DomainError("Paneitz calibration needs k = 4 scenes");
    const auto p0 = sc.pack<double>();
    InvariantEvaluator<double> e0(p0);
    for (const auto& u : us) {
      const auto p1 = sc.pack<double>(&u.field, 1.0);
      const JetD uY = restrict_to_patch(u.field, sc);
      const double lhs = std::exp(4.0 * uY.value()) * InvariantEvaluator<double>(p1).Qbar4();
      const double q = e0.Qbar4();
      c.residual_plus = std::max(c.residual_plus, relative_residual(lhs, q + e0.Pbar4_signed(uY, 1.0)));
      c.residual_minus = std::max(c.residual_minus, relative_residual(lhs, q + e0.Pbar4_signed(uY, -1.0)));
    }
  }
  if (c.residual_plus < tol && c.residual_minus > tol) c.sign = 1.0;
  if (c.residual_minus < tol && c.residual_plus > tol) c.sign = -1.0;
  return c;
}

// I(c^2 g) = c^w I(g).
inline double check_homogeneity(const InvariantInfo& info, const Scene& sc, double c) {
  const double w = info.weight_for(sc.k());
  const auto u = factors::constant(sc.n(), std::log(c));
  const double v0 = info.eval(InvariantEvaluator<double>(sc.pack<double>()));
  const double v1 = info.eval(InvariantEvaluator<double>(sc.pack<double>(&u.field, 1.0)));
  return relative_residual(v1, std::pow(c, w) * v0);
}

// The weight -4 natural scalars on four-dimensional submanifolds, grouped by
// the order j of the transverse jet of the conformal factor their
// linearization sees.
struct StratumScalar {
  std::string name;
  int j = 0;
  std::function<double(const InvariantEvaluator<double>&)> eval;
  std::function<Dual(const InvariantEvaluator<Dual>&)> eval_dual;
};

namespace detail {
template <class F>
StratumScalar stratum(std::string name, int j, F f) {
  return {std::move(name), j, f, f};
}
}  // namespace detail

inline const std::vector<StratumScalar>& strata_scalars() {
  using detail::stratum;
  static const std::vector<StratumScalar> list = [] {
    std::vector<StratumScalar> s;
    // Shorthand used below: p pack, c conformal tensors, H mean curvature.
#define QGEO_CTX                                  \
  const auto& p = e.pack();                       \
  const auto& c = e.tensors();                    \
  const int k = p.k;                              \
  (void)c;                                        \
  (void)k;
    s.push_back(stratum("<F, Pbar>", 0, [](const auto& e) {
      QGEO_CTX return einsum("ab,ab->", *c.F, p.schouten_bar)[0].value();
    }));
    s.push_back(stratum("W_tnt . D", 0, [](const auto& e) {
      QGEO_CTX return einsum("aA,aA->", c.W_tnt, c.D)[0].value();
    }));
    s.push_back(stratum("|Lo|^2 Jbar", 0, [](const auto& e) {
      QGEO_CTX return (c.Lo_sq * p.j_bar[0]).value();
    }));
    s.push_back(stratum("<Lo^2, Pbar>", 0, [](const auto& e) {
      QGEO_CTX return einsum("ab,ab->", c.Lo2, p.schouten_bar)[0].value();
    }));
    s.push_back(stratum("Jbar^2", 0, [](const auto& e) {
      QGEO_CTX return (p.j_bar[0] * p.j_bar[0]).value();
    }));
    s.push_back(stratum("|Pbar|^2", 0, [](const auto& e) {
      QGEO_CTX return einsum("ab,ab->", p.schouten_bar, p.schouten_bar)[0].value();
    }));
    s.push_back(stratum("G Jbar", 0, [](const auto& e) {
      QGEO_CTX return (*c.G * p.j_bar[0]).value();
    }));
    s.push_back(stratum("|D|^2", 0, [](const auto& e) {
      QGEO_CTX return einsum("aA,aA->", c.D, c.D)[0].value();
    }));

    s.push_back(stratum("H . Lap H", 1, [](const auto& e) {
      QGEO_CTX return einsum("A,aaA->", p.H, cov_bar(p, cov_bar(p, p.H)))[0].value();
    }));
    s.push_back(stratum("H . div D", 1, [](const auto& e) {
      QGEO_CTX return einsum("A,aaA->", p.H, cov_bar(p, c.D))[0].value();
    }));
    s.push_back(stratum("H . div W_tnt", 1, [](const auto& e) {
      QGEO_CTX return einsum("A,aaA->", p.H, cov_bar(p, c.W_tnt))[0].value();
    }));
    s.push_back(stratum("|H|^4", 1, [](const auto& e) {
      QGEO_CTX return (c.H_sq * c.H_sq).value();
    }));
    s.push_back(stratum("|H|^2 |Lo|^2", 1, [](const auto& e) {
      QGEO_CTX return (c.H_sq * c.Lo_sq).value();
    }));
    s.push_back(stratum("H Lo Lo H", 1, [](const auto& e) {
      QGEO_CTX return einsum("B,B->", einsum("A,abA,abB->B", p.H, p.Lo, p.Lo), p.H)[0].value();
    }));
    s.push_back(stratum("|H|^2 Jbar", 1, [](const auto& e) {
      QGEO_CTX return (c.H_sq * p.j_bar[0]).value();
    }));
    s.push_back(stratum("G |H|^2", 1, [](const auto& e) {
      QGEO_CTX return (*c.G * c.H_sq).value();
    }));
    s.push_back(stratum("H . tr Lo^3", 1, [](const auto& e) {
      QGEO_CTX return einsum("A,A->", p.H, einsum("abB,bcB,caA->A", p.Lo, p.Lo, p.Lo))[0].value();
    }));
    s.push_back(stratum("H Lo F", 1, [](const auto& e) {
      QGEO_CTX return einsum("A,abA,ab->", p.H, p.Lo, *c.F)[0].value();
    }));
    s.push_back(stratum("H Lo Pbar", 1, [](const auto& e) {
      QGEO_CTX return einsum("A,abA,ab->", p.H, p.Lo, p.schouten_bar)[0].value();
    }));
    s.push_back(stratum("H H W_ntnt", 1, [](const auto& e) {
      QGEO_CTX return einsum("A,B,AaBa->", p.H, p.H, blk(p.weyl, "ntnt", k))[0].value();
    }));
    s.push_back(stratum("H Lo W_tntn", 1, [](const auto& e) {
      QGEO_CTX return einsum("A,abB,aAbB->", p.H, p.Lo, blk(p.weyl, "tntn", k))[0].value();
    }));
    s.push_back(stratum("H . mC", 1, [](const auto& e) {
      QGEO_CTX return einsum("A,A->", p.H, blk(c.mCa, "n", k))[0].value();
    }));

    s.push_back(stratum("G tr P_nn", 2, [](const auto& e) {
      QGEO_CTX return (*c.G * einsum("AA->", blk(p.schouten, "nn", k))[0]).value();
    }));
    s.push_back(stratum("P_nn W_ntnt", 2, [](const auto& e) {
      QGEO_CTX return einsum("AB,AaBa->", blk(p.schouten, "nn", k), blk(p.weyl, "ntnt", k))[0].value();
    }));
    s.push_back(stratum("|H|^2 tr P_nn", 2, [](const auto& e) {
      QGEO_CTX return (c.H_sq * einsum("AA->", blk(p.schouten, "nn", k))[0]).value();
    }));
    s.push_back(stratum("|Lo|^2 tr P_nn", 2, [](const auto& e) {
      QGEO_CTX return (c.Lo_sq * einsum("AA->", blk(p.schouten, "nn", k))[0]).value();
    }));
    s.push_back(stratum("H H P_nn", 2, [](const auto& e) {
      QGEO_CTX return einsum("A,B,AB->", p.H, p.H, blk(p.schouten, "nn", k))[0].value();
    }));
    s.push_back(stratum("Lo Lo P_nn", 2, [](const auto& e) {
      QGEO_CTX return einsum("abA,abB,AB->", p.Lo, p.Lo, blk(p.schouten, "nn", k))[0].value();
    }));
    s.push_back(stratum("Jbar tr P_nn", 2, [](const auto& e) {
      QGEO_CTX return (p.j_bar[0] * einsum("AA->", blk(p.schouten, "nn", k))[0]).value();
    }));
    s.push_back(stratum("(tr P_nn)^2", 2, [](const auto& e) {
      QGEO_CTX auto t = einsum("AA->", blk(p.schouten, "nn", k))[0];
      return (t * t).value();
    }));
    s.push_back(stratum("|P_nn|^2", 2, [](const auto& e) {
      QGEO_CTX auto P = blk(p.schouten, "nn", k);
      return einsum("AB,AB->", P, P)[0].value();
    }));

    s.push_back(stratum("H . grad_n J", 3, [](const auto& e) {
      QGEO_CTX return einsum("A,A->", p.H, blk(p.dj, "n", k))[0].value();
    }));
    s.push_back(stratum("Lap J", 4, [](const auto& e) {
      QGEO_CTX return einsum("aa->", p.ddj)[0].value();
    }));
#undef QGEO_CTX
    return s;
  }();
  return list;
}

// Linearization of a stratum scalar (weight -4) for the given factor.
inline double stratum_linearization(const StratumScalar& s, const Scene& sc, const ConformalFactor& u) {
  auto r = linearize(
      s.name, sc, u,
      [&s](const auto& q, const auto&) {
        using S = typename std::decay_t<decltype(q)>::scalar_type;
        if constexpr (std::is_same_v<S, Dual>)
          return s.eval_dual(InvariantEvaluator<Dual>(q));
        else
          return s.eval(InvariantEvaluator<double>(q));
      },
      {-4.0}, false);
  return r.numeric[0];
}

}  // namespace qgeo

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qgeo/ambient/catalog.hpp"
#include "qgeo/ambient/curvature.hpp"
#include "qgeo/cli/report.hpp"
#include "qgeo/conformal/independence.hpp"
#include "qgeo/conformal/verifier.hpp"
#include "qgeo/gauss_bonnet/suite.hpp"
#include "qgeo/invariants/registry.hpp"
#include "qgeo/renorm/renormalized_area.hpp"
#include "qgeo/submanifold/checks.hpp"

namespace qgeo {

struct SuiteOptions {
  std::uint64_t seed = 7;
  int upsilon_degree = 4;
};

namespace suites {

// Random metric, random polynomial graph and a base point near the origin.
struct RandomScene {
  Scene scene;
  std::vector<Polynomial> heights;
};

inline RandomScene random_scene(int k, int n, std::uint64_t seed, bool ddweyl = false) {
  std::mt19937_64 rng(seed);
  std::vector<Polynomial> u;
  for (int b = k; b < n; ++b) u.push_back(qgeo::random_polynomial(rng, k, 5, 2, 4, 0.4));
  std::uniform_real_distribution<double> U(-0.2, 0.2);
  std::vector<double> y(k);
  for (auto& v : y) v = U(rng);
  PackOptions opt;
  opt.ddweyl = ddweyl;
  const std::string name = "random-k" + std::to_string(k) + "-n" + std::to_string(n) + "-" + std::to_string(seed);
  return {Scene{name, metrics::random_polynomial(n, seed + 1), patches::graph(k, n, u), y, opt}, u};
}

inline std::string kn(int k, int n) { return "k=" + std::to_string(k) + ",n=" + std::to_string(n); }

inline ConformalFactor upsilon(int n, std::uint64_t seed, const SuiteOptions& o, double amp = 0.3) {
  return factors::random(n, seed, o.upsilon_degree, amp);
}

// One check per residual entry, named prefix/entry.
inline void add_record(Report& r, const std::string& prefix, const std::string& anchor, const ResidualRecord& rec,
                       double tol) {
  for (const auto& [name, v] : rec) r.add(make_check(prefix + "/" + name, anchor, v, tol));
}

inline void add_linearizations(Report& r, const std::string& prefix, const std::string& anchor,
                               const std::vector<LinearizationReport>& rs, double tol) {
  for (const auto& l : rs) {
    CheckRecord c = make_check(prefix + "/" + l.name, anchor, l.residual, tol, {{"numeric", max_abs(l.numeric)}});
    if (l.central) {
      c.values["method_gap"] = l.method_gap;
      if (!(l.method_gap < tol)) {
        c.pass = false;
        c.note = "nilpotent and central-difference linearizations disagree";
      }
    }
    if (l.inconsistent) {
      c.pass = false;
      c.note = "inconsistent linearization";
    }
    r.add(c);
  }
}

// Ambient curvature identities at x: Riemann symmetries, Bianchi identities,
// Weyl and Cotton traces, Bach symmetry and trace, metric compatibility.
inline ResidualRecord ambient_identity_residuals(const MetricField& g, const std::vector<double>& x) {
  using TD = LabeledTensor<double>;
  CurvatureDepth d;
  d.ddweyl = false;
  const auto cp = curvature_pack<double>(g.jet(x, metric_order_for(d)), d);
  const TD Rm = values(cp.rm), W = values(cp.weyl), C = values(*cp.cotton), B = values(*cp.bach),
           gi = values(cp.ginv), gv = values(cp.g);
  const int n = g.dim;
  const double sc = 1.0 + max_abs(Rm);
  auto rel = [sc](const TD& t) { return max_abs(t) / sc; };
  ResidualRecord out;
  out["Rm-antisym-12"] = rel(Rm + einsum("bacd->abcd", Rm));
  out["Rm-antisym-34"] = rel(Rm + einsum("abdc->abcd", Rm));
  out["Rm-pair-sym"] = rel(Rm - einsum("cdab->abcd", Rm));
  out["bianchi-1"] = rel(symmetrize(Rm, {0, 1, 2}, Symmetry::antisym));
  out["weyl-trace"] = rel(einsum("acbd,cd->ab", W, gi));
  out["cotton-trace"] = rel(einsum("bac,bc->a", C, gi));
  out["cotton-cyclic"] = rel(symmetrize(C, {0, 1, 2}, Symmetry::antisym));
  out["bach-trace"] = std::abs(einsum("ab,ab->", B, gi)[0]) / sc;
  out["bach-sym"] = max_abs(symmetrize(B, {0, 1}, Symmetry::antisym)) / (1.0 + max_abs(B));
  const TD dW = values(*cp.dweyl);
  out["weyl-div"] = rel(einsum("fabec,fe->abc", dW, gi) - C * double(n - 3));
  const TD cg = einsum("abd,ce->abcde", C, gv);
  out["weyl-bianchi"] = rel(symmetrize(dW, {0, 1, 2}, Symmetry::antisym) -
                            symmetrize(symmetrize(cg, {0, 1, 2}, Symmetry::antisym), {3, 4}, Symmetry::antisym) * -2.0);
  out["bianchi-2"] = rel(symmetrize(values(cov_deriv(cp.rm, cp.gamma)), {0, 1, 2}, Symmetry::antisym));
  out["metric-compat"] = max_abs(values(cov_deriv(cp.g, cp.gamma)));
  return out;
}

// ---------------------------------------------------------------------------
// Acceptance criteria.

// Q = (k-1)! lambda^{k/2} pointwise on minimal submanifolds of Einstein spaces.
inline Report criterion_factorization(const SuiteOptions&) {
  Report r;
  const std::vector<ClosedExample> exs{closed::equatorial_sphere_polar(2, 3), closed::equatorial_sphere_polar(2, 5),
                                               closed::equatorial_sphere_polar(4, 5), closed::equatorial_sphere_polar(4, 7),
                                               closed::clifford_torus(), closed::s2xs2()};
  for (const auto& ex : exs) {
    const auto f = factorization_check(ex, 3);
    r.add(make_check("factorization/Q/" + ex.name, "Q factorizes on minimal submanifolds of Einstein spaces",
                     f.q_residual, 1e-6, {{"expected", factorial(ex.k() - 1) * std::pow(ex.lambda, ex.k() / 2)}}));
    r.add(make_check("factorization/P/" + ex.name, "P_k factorizes into shifted Laplacians", f.operator_residual, 1e-6,
                     {{"max_P", f.max_operator}}));
  }
  return r;
}

// int Q = c int Pf + int W_Q recovers c = (k-1)!/(k-1)!!.
inline Report criterion_constant(const SuiteOptions&) {
  Report r;
  for (auto [k, n] : {std::pair{2, 3}, {2, 5}, {4, 5}, {4, 7}}) {
    const auto c = c_nk_check(k, n);
    r.add(make_check("constant/" + kn(k, n), "Q = c Pf + W_Q + divergence with c = (k-1)!/(k-1)!!", c.residual, 1e-6,
                     {{"recovered", c.recovered}, {"expected", c.expected}}));
  }
  return r;
}

// Closed minimal Gauss-Bonnet identities, both forms.
inline Report criterion_closed_gb(const SuiteOptions&) {
  Report r;
  struct Case {
    ClosedExample ex;
    double tol;
  };
  const std::vector<Case> cases{{closed::clifford_torus(), 1e-5},
                                {closed::s2xs2(), 1e-4},
                                {closed::equatorial_sphere_polar(2, 3), 1e-5},
                                {closed::equatorial_sphere_polar(4, 5), 1e-4},
                                {closed::t4(), 1e-4}};
  for (const auto& c : cases) {
    const auto g = closed_gb(c.ex);
    const std::map<std::string, double> v{{"lhs", g.lhs},
                                          {"euler", g.euler_term},
                                          {"weyl", g.weyl_term},
                                          {"alternate", g.alternate_term},
                                          {"area", g.area}};
    const std::string form = c.ex.k() == 2 ? "minimal-gbc2" : "minimal-gbc4";
    r.add(make_check("closed-gb/" + form + "/" + c.ex.name,
                     c.ex.k() == 2 ? "lambda A = 2 pi chi + int |Lo|^2/2 - W^T"
                                   : "lambda^2 A = 4 pi^2 chi/3 - (1/6) int (|Wbar|^2/4 - I - 2|F|^2 + 2G^2)",
                     g.alternate_residual, c.tol, v));
    r.add(make_check("closed-gb/weyl-form/" + c.ex.name, "lambda^{k/2} A = euler term + int W_Q/(k-1)!", g.residual,
                     c.tol, v));
  }
  return r;
}

inline Report criterion_renormalized_area(const SuiteOptions&) {
  Report r;
  for (int k : {2, 4}) {
    const auto m = hemisphere_model(k, k + 1);
    const auto fit = fit_renormalized_area(m);
    const auto gb = renorm_gb_check(m, fit);
    r.add(make_check("renorm/gb/k=" + std::to_string(k), "renormalized area = c_k chi for a totally geodesic ball",
                     gb.residual, 1e-5,
                     {{"area", gb.renormalized_area}, {"expected", gb.expected}, {"condition", fit.condition}}));
    r.add(make_check("renorm/integrand/k=" + std::to_string(k), "Weyl-type integrand vanishes on the model",
                     gb.max_integrand, 1e-8));
    const auto m2 = hemisphere_model(k, k + 1, 2.0);
    const double a2 = fit_renormalized_area(m2).renormalized_area;
    r.add(make_check("renorm/radius/k=" + std::to_string(k), "renormalized area does not depend on R",
                     std::abs(a2 - fit.renormalized_area), 1e-6, {{"R=1", fit.renormalized_area}, {"R=2", a2}}));
    const auto half = fit_renormalized_area(m, geometric_samples(1e-3, 5e-2, 12));
    r.add(make_check("renorm/stability/k=" + std::to_string(k), "fit is stable under halving the eps range",
                     std::abs(half.renormalized_area - fit.renormalized_area), 1e-6));
    if (k == 2)
      r.add(make_check("renorm/pole/k=2", "coefficient of 1/eps is 2 pi R",
                       std::abs(fit.coefficient(-1) - 2 * std::numbers::pi), 1e-8,
                       {{"coefficient", fit.coefficient(-1)}}));
    for (const auto& w : fit.warnings) r.warnings.push_back(w);
  }
  return r;
}

// Gauss-Codazzi, divergence, Simons and Bianchi/trace identities on random scenes.
inline Report criterion_identities(const SuiteOptions& o, int per_case = 10) {
  Report r;
  struct Worst {
    ResidualRecord max;
    void take(const ResidualRecord& rec) {
      for (const auto& [k, v] : rec) max[k] = std::max(max[k], std::isfinite(v) ? v : INFINITY);
    }
  };
  std::vector<std::pair<int, int>> cases{{2, 5}, {2, 6}, {2, 7}, {4, 5}, {4, 6}, {4, 7}, {2, 3}, {3, 4}};
  for (auto [k, n] : cases) {
    Worst w;
    double lo = 0;
    const int count = n == k + 1 && k != 4 ? per_case / 2 : per_case;
    for (int s = 0; s < count; ++s) {
      const auto rs = random_scene(k, n, o.seed * 1000 + 100 * k + 10 * n + s);
      const auto p = rs.scene.pack<double>();
      const auto c = conformal_tensors(p);
      w.take(gauss_codazzi_residuals(p, c));
      w.take(divergence_identity_residuals(p, c));
      if (k >= 3) w.take({{"simons", simons_residual(p, c)}});
      if (k == 2) w.take(weyl_trace_residuals_k2(p));
      w.take(ambient_identity_residuals(rs.scene.g, rs.scene.x()));
      lo = std::max(lo, max_abs(at(p.Lo)));
    }
    const std::string tag = "identities/" + kn(k, n) + (n == k + 1 ? "/hypersurface" : "");
    add_record(r, tag, "max over " + std::to_string(count) + " random scenes", w.max, 1e-6);
    r.add(make_check(tag + "/nonvacuous", "trace-free second fundamental form is generic", lo, 1e-3, {}, ">"));
  }
  return r;
}

// Finite-t invariance of the registered conformal invariants plus the
// closed-form linearizations.
inline Report criterion_conformal_invariance(const SuiteOptions& o) {
  Report r;
  static const std::vector<std::string> names{"K1", "K2", "I",  "J",  "2I+J", "W_Q",
                                              "Wm", "Juhl1", "Juhl2", "N1", "N2"};
  for (auto [k, n] : {std::pair{4, 6}, {4, 5}, {4, 7}, {2, 5}}) {
    const auto rs = random_scene(k, n, o.seed * 1000 + 500 + 10 * k + n, true);
    const auto u = upsilon(n, o.seed * 1000 + 600 + n, o);
    for (const auto& name : names) {
      const auto& info = find_invariant(name);
      if (!info.defined_at(k, n)) continue;
      const auto inv = check_invariance(info, rs.scene, u, {0.1, -0.1});
      double fin = 0;
      for (auto [t, res] : inv.finite) fin = std::max(fin, res);
      r.add(make_check("invariance/" + name + "/" + kn(k, n), "finite rescaling at t = +-0.1", fin, 1e-5,
                       {{"value", inv.value}}));
      r.add(make_check("invariance-lin/" + name + "/" + kn(k, n), "conformal linearization vanishes",
                       inv.linearization, 1e-6));
    }
  }
  for (auto [k, n] : {std::pair{4, 6}, {2, 4}}) {
    const auto rs = random_scene(k, n, o.seed * 1000 + 700 + n);
    const auto u = upsilon(n, o.seed * 1000 + 710 + n, o);
    for (double w : {0.0, 1.5})
      add_linearizations(r, "linearization/basic/" + kn(k, n) + "/w=" + std::to_string(w).substr(0, 3),
                         "transformation of W, P, L, H and the weighted Laplacian",
                         check_basic_linearizations(rs.scene, u, w), 1e-6);
    add_linearizations(r, "linearization/tensors/" + kn(k, n), "Fialkow tensor, |Lo|^2 and normal curvature",
                       check_tensor_invariance(rs.scene, u), 1e-6);
  }
  for (auto [k, n] : {std::pair{4, 6}, {4, 5}}) {
    const auto rs = random_scene(k, n, o.seed * 1000 + 800 + n);
    const auto u = upsilon(n, o.seed * 1000 + 810 + n, o);
    add_linearizations(r, "linearization/tangential/" + kn(k, n), "D, mP, mC, mB only see tangential derivatives",
                       check_tangential_dependence(rs.scene, u), 1e-6);
  }
  {
    const auto rs = random_scene(4, 6, o.seed * 1000 + 900);
    add_linearizations(r, "linearization/step-table/k=4,n=6", "weight -4 building blocks in dimension four",
                       check_step_table(rs.scene, upsilon(6, o.seed * 1000 + 901, o)), 1e-6);
  }
  return r;
}

// e^{kU} Q(e^{2U} g) = Q(g) + P_k U, P_k 1 = 0, and the Paneitz sign.
inline Report criterion_q_law(const SuiteOptions& o) {
  Report r;
  std::vector<Scene> scenes;
  for (int n : {3, 4, 5}) scenes.push_back(random_scene(2, n, o.seed * 1000 + 1100 + n).scene);
  scenes.push_back({"clifford-torus", metrics::sphere(3), patches::clifford_torus(), {0.4, 1.0}, {}});
  scenes.push_back({"equatorial-s2-in-s5", metrics::sphere(5), patches::equatorial_sphere(2, 5), {0.2, 0.7}, {}});
  for (int n : {5, 6, 7}) scenes.push_back(random_scene(4, n, o.seed * 1000 + 1110 + n).scene);
  scenes.push_back({"s2xs2", metrics::sphere(5), patches::s2xs2(), {0.3, 0.7, -0.2, 2.1}, {}});
  scenes.push_back({"equatorial-s4-in-s5", metrics::sphere(5), patches::equatorial_sphere(4, 5), {0.1, 0.4, 0.3, 0.05}, {}});
  for (const auto& sc : scenes) {
    for (std::uint64_t s : {1, 2, 3}) {
      const auto u = upsilon(sc.n(), o.seed * 1000 + 1200 + s, o, 0.25);
      const auto q = check_Q_transformation(sc, u);
      r.add(make_check("q-law/" + sc.name + "/" + u.name, "e^{kU} Q(e^{2U} g) = Q + P_k U", q.residual, 1e-5,
                       {{"Q", q.q}, {"P_k U", q.pk}, {"lhs", q.lhs}}));
    }
    const auto p = sc.pack<double>();
    const InvariantEvaluator<double> e(p);
    const double pk1 = sc.k() == 2 ? e.P2(JetD(1.0)) : e.P4(JetD(1.0));
    r.add(make_check("q-law/kernel/" + sc.name, "P_k annihilates constants", std::abs(pk1), 1e-12));
  }
  const auto cal = calibrate_paneitz({random_scene(4, 6, o.seed * 1000 + 1400).scene},
                                     {upsilon(6, o.seed * 1000 + 1402, o), upsilon(6, o.seed * 1000 + 1403, o)});
  CheckRecord c = make_check("q-law/paneitz-calibration", "intrinsic Paneitz sign fixed by the Qbar4 law",
                             cal.sign > 0 ? cal.residual_plus : cal.residual_minus, 1e-5,
                             {{"sign", cal.sign}, {"residual_plus", cal.residual_plus}, {"residual_minus", cal.residual_minus}});
  if (cal.sign == 0.0) {
    c.pass = false;
    c.note = "neither sign satisfies the law";
  } else if (cal.sign != kPaneitzSign) {
    c.pass = false;
    c.note = "calibrated sign differs from the engine convention";
  }
  r.add(c);
  return r;
}

// Strata linearizations vanish for factors with vanishing transverse j-jet,
// and the Gram determinants of the independence witness are positive.
inline Report criterion_strata(const SuiteOptions& o) {
  Report r;
  const auto rs = random_scene(4, 6, o.seed * 1000 + 800);
  for (int j = 0; j <= 4; ++j) {
    const auto tight = factors::vanishing_on_graph(4, 6, rs.heights, j + 1, o.seed * 1000 + 810 + j);
    const auto loose = factors::vanishing_on_graph(4, 6, rs.heights, j, o.seed * 1000 + 820 + j);
    double worst = 0, witness = 0;
    int count = 0;
    for (const auto& s : strata_scalars()) {
      if (s.j != j) continue;
      ++count;
      const double v = std::abs(stratum_linearization(s, rs.scene, tight));
      worst = std::max(worst, std::isfinite(v) ? v : INFINITY);
      witness = std::max(witness, std::abs(stratum_linearization(s, rs.scene, loose)));
    }
    const std::string tag = "strata/j=" + std::to_string(j);
    r.add(make_check(tag, "linearization vanishes when the transverse j-jet of U does",
                     worst, 1e-7, {{"scalars", count}}));
    r.add(make_check(tag + "/witness", "a factor with nonvanishing j-jet moves the stratum", witness, 1e-4, {}, ">"));
  }
  for (int n : {5, 6, 7}) {
    const auto w = linear_independence_witness(n);
    r.add(make_check("independence/tensors/n=" + std::to_string(n), "Gram determinant of the tensor family",
                     w.tensor_det, 0.0, {}, ">"));
    r.add(make_check("independence/scalars/n=" + std::to_string(n), "Gram determinant of the scalar family",
                     w.scalar_det, 0.0, {}, ">"));
  }
  return r;
}

// Scenes used for route agreement: the closed catalog plus random scenes.
inline std::vector<Scene> route_scenes(const SuiteOptions& o) {
  std::vector<Scene> s;
  PackOptions dd;
  dd.ddweyl = true;
  s.push_back({"clifford-torus", metrics::sphere(3), patches::clifford_torus(), {0.4, 1.0}, dd});
  s.push_back({"equatorial-s2-in-s3", metrics::sphere(3), patches::equatorial_sphere(2, 3), {0.4, 1.0}, dd});
  s.push_back({"equatorial-s4-in-s5", metrics::sphere(5), patches::equatorial_sphere(4, 5), {0.1, 0.4, 0.3, 0.05}, dd});
  s.push_back({"s2xs2-in-s5", metrics::sphere(5), patches::s2xs2(), {0.3, 0.7, -0.2, 2.1}, dd});
  s.push_back({"hemisphere-h5", metrics::hyperbolic(5), patches::hemisphere_graph(4, 5, 1.0), {0.1, -0.2, 0.3, 0.1}, dd});
  for (auto [k, n] : {std::pair{4, 6}, {4, 5}, {4, 7}, {3, 5}, {2, 5}, {5, 6}})
    s.push_back(random_scene(k, n, o.seed * 1000 + 1500 + 10 * k + n, true).scene);
  return s;
}

inline Report criterion_routes(const SuiteOptions& o) {
  Report r;
  auto rel = [](double a, double b) { return relative_residual(a, b); };
  for (const auto& sc : route_scenes(o)) {
    const auto p = sc.pack<double>();
    const InvariantEvaluator<double> e(p);
    const int k = sc.k(), n = sc.n();
    auto route = [&](const std::string& name, const std::string& anchor, const std::function<double()>& a,
                     const std::function<double()>& b) {
      double va, vb;
      try {
        va = a();
        vb = b();
      } catch (const DomainError&) {
        return;
      }
      r.add(make_check("routes/" + name + "/" + sc.name, anchor, rel(va, vb), 1e-5, {{"a", va}, {"b", vb}}));
    };
    route("K1", "divergence form vs expanded form", [&] { return e.K1(); }, [&] { return e.K1_expanded(); });
    route("K2", "divergence form vs expanded form", [&] { return e.K2(); }, [&] { return e.K2_expanded(); });
    if (n != 4) {
      route("I", "direct vs I1 + (k-6)(I2 + I3)", [&] { return e.I(); }, [&] { return e.I_assembled(); });
      route("J", "direct vs assembled", [&] { return e.Jinv(); }, [&] { return e.J_assembled(); });
      route("2I+J", "pole-free form vs 2I + J", [&] { return e.two_I_plus_J(); },
            [&] { return 2 * e.I() + e.Jinv(); });
    }
    if (k >= 3 && n != 4)
      route("Q4", "general Q4 vs intrinsic Q4 plus extrinsic terms", [&] { return e.Q4(); },
            [&] { return e.Q4_from_intrinsic(); });
    if (k == 4) {
      route("Q", "critical Q vs Q4", [&] { return e.Q(); }, [&] { return e.Q4(); });
      route("Q-decomposition", "Q = 2 Pf + W_Q + divergence", [&] { return e.Q(); },
            [&] { return 2 * e.Pf() + e.W_Q() + e.Q_divergence(); });
      route("N1", "general N1 vs k = 4 display", [&] { return e.N1(); }, [&] { return e.N1_k4(); });
      route("N2", "general N2 vs k = 4 display", [&] { return e.N2(); }, [&] { return e.N2_k4(); });
    }
    if (n == k + 1 && k >= 3) {
      route("Wm", "general Wm vs hypersurface display", [&] { return e.Wm(); }, [&] { return e.Wm_hypersurface(); });
      route("Juhl1", "general vs hypersurface display", [&] { return e.Juhl1(); },
            [&] { return e.Juhl1_hypersurface(); });
      route("Juhl2", "general vs hypersurface display", [&] { return e.Juhl2(); },
            [&] { return e.Juhl2_hypersurface(); });
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Module batteries.

inline Report ambient_suite(const SuiteOptions& o) {
  Report r;
  for (int s = 0; s < 10; ++s) {
    const int n = 3 + s % 6;
    std::vector<double> x(n);
    for (int a = 0; a < n; ++a) x[a] = 0.1 * std::sin(static_cast<double>(o.seed + s) + 1.7 * a);
    add_record(r, "ambient/random-n" + std::to_string(n) + "-" + std::to_string(s), "curvature identities",
               ambient_identity_residuals(metrics::random_polynomial(n, o.seed * 1000 + s), x), 1e-10);
  }
  // Space forms: R_abcd = kappa (g_ac g_bd - g_ad g_bc).
  for (auto [name, g, kappa] : {std::tuple{"sphere", metrics::sphere(5), 1.0}, {"hyperbolic", metrics::hyperbolic(5), -1.0},
                               {"flat", metrics::flat(5), 0.0}}) {
    const std::vector<double> x{0.3, -0.2, 0.5, 0.1, 0.7};
    const auto cp = curvature_pack<double>(g.jet(x, kMetricOrder));
    const auto gq = values(cp.g);
    const auto gg = einsum("ac,bd->abcd", gq, gq);
    const auto expected = (gg - einsum("abdc->abcd", gg)) * kappa;
    r.add(make_check(std::string("ambient/space-form/") + name, "constant sectional curvature",
                     max_abs(values(cp.rm) - expected), 1e-10, {{"kappa", kappa}}));
    r.add(make_check(std::string("ambient/space-form-weyl/") + name, "space forms are conformally flat",
                     max_abs(values(cp.weyl)), 1e-10));
  }
  return r;
}

inline Report submanifold_suite(const SuiteOptions& o) { return criterion_identities(o); }

inline Report invariants_suite(const SuiteOptions& o) { return criterion_routes(o); }

inline Report conformal_suite(const SuiteOptions& o) {
  Report r = criterion_conformal_invariance(o);
  r.append(criterion_q_law(o));
  r.append(criterion_strata(o));
  return r;
}

inline Report gauss_bonnet_suite(const SuiteOptions& o) {
  Report r = criterion_factorization(o);
  r.append(criterion_constant(o));
  r.append(criterion_closed_gb(o));
  for (const auto& ex : {closed::equatorial_sphere_polar(2, 3), closed::equatorial_sphere_polar(4, 5), closed::s2xs2(),
                         closed::clifford_torus(), closed::t4()}) {
    const auto c = chern_gb(ex);
    r.add(make_check("chern-gb/" + ex.name, "int Pf = (2 pi)^{k/2} chi", c.residual, 1e-8,
                     {{"integral", c.integral}, {"expected", c.expected}}));
  }
  for (const auto& ex : {closed::equatorial_sphere_polar(4, 5), closed::s2xs2(), closed::t4()}) {
    const auto d = divergence_integral_check(ex);
    r.add(make_check("divergence/" + ex.name, "divergence terms integrate to zero", d.max_abs(), 1e-8,
                     {{"Q_div", d.q_divergence}, {"K1", d.K1}, {"K2", d.K2}}));
  }
  return r;
}

inline Report renorm_suite(const SuiteOptions& o) { return criterion_renormalized_area(o); }

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> s{"ambient",      "submanifold", "invariants", "conformal",
                                          "gauss-bonnet", "renorm-area", "all"};
  return s;
}

inline Report run_suite(const std::string& name, const SuiteOptions& o) {
  Report r;
  if (name == "ambient") r = ambient_suite(o);
  else if (name == "submanifold") r = submanifold_suite(o);
  else if (name == "invariants") r = invariants_suite(o);
  else if (name == "conformal") r = conformal_suite(o);
  else if (name == "gauss-bonnet") r = gauss_bonnet_suite(o);
  else if (name == "renorm-area") r = renorm_suite(o);
  else if (name == "all") {
    for (const auto& s : suite_names())
      if (s != "all") r.append(run_suite(s, o));
  } else {
    throw ConfigError("unknown suite '" + name + "'");
  }
  r.command = "verify " + name;
  r.seed = o.seed;
  return r;
}

}  // namespace suites

}  // namespace qgeo

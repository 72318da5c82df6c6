#pragma once

#include <string>

#include "qgeo/errors.hpp"
#include "qgeo/submanifold/conformal_tensors.hpp"

namespace qgeo {

// Sign of the first-order part of the intrinsic Paneitz operator,
// Pbar4 = Lap^2 + sign * div((4 Pbar - 2 Jbar g) grad). The conformal verifier
// re-derives it from the transformation law of Qbar4.
constexpr double kPaneitzSign = 1.0;

struct InvariantOptions {
  // Read (k - 3)/(n - 4) as 1 when k = 3 and n = 4.
  bool k3n4_convention = false;
};

// Pointwise evaluation of the scalar conformal submanifold invariants and the
// Q-curvature family. Values are taken at the base point of the pack; S is
// double or Dual.
template <class S>
class InvariantEvaluator {
 public:
  using scalar_type = S;
  using J = Jet<S>;
  using T = JT<S>;

  explicit InvariantEvaluator(const SubmanifoldPack<S>& p, InvariantOptions opt = {})
      : p_(p), c_(conformal_tensors(p)), opt_(opt), k_(p.k), n_(p.n) {
    Wt_ = blk(p.weyl, "tttt", k_);
    Wttnt_ = blk(p.weyl, "ttnt", k_);
    Wttnn_ = blk(p.weyl, "ttnn", k_);
    Wtntn_ = blk(p.weyl, "tntn", k_);
    mCa_t_ = blk(c_.mCa, "t", k_);
    DLo_ = einsum("bA,abA->a", c_.D, p.Lo);
    trP_ = einsum("aa->", c_.mP)[0];
    trB_ = einsum("aa->", c_.mB)[0];
    D2_ = einsum("aA,aA->", c_.D, c_.D)[0];
    G_ = c_.G ? *c_.G : J(0.0);
  }

  const ConformalTensors<S>& tensors() const { return c_; }
  const SubmanifoldPack<S>& pack() const { return p_; }
  int k() const { return k_; }
  int n() const { return n_; }

  // Weight -4 divergence-type invariants, divergence form and expanded form.
  S K1() const {
    T v = einsum("bcA,abAc->a", p_.Lo, Wttnt_);
    return (div(v) + LoC() * (k_ - 4.0)).value();
  }
  S K1_expanded() const {
    T dW = einsum("aabAc->bAc", cov_bar(p_, Wttnt_));
    J a = einsum("bcA,bAc->", p_.Lo, dW)[0];
    J w2 = einsum("abAc,abAc->", Wttnt_, Wttnt_)[0];
    J dw = einsum("aA,aA->", c_.D, c_.W_tnt)[0];
    return (a + w2 * 0.5 + dw + LoC() * (k_ - 4.0)).value();
  }
  S K2() const {
    T v = einsum("abA,bA->a", p_.Lo, c_.W_tnt);
    return (div(v) + einsum("aA,aA->", c_.D, c_.W_tnt)[0] * (k_ - 4.0)).value();
  }
  S K2_expanded() const {
    J a = einsum("abA,abA->", p_.Lo, cov_bar(p_, c_.W_tnt))[0];
    J dw = einsum("aA,aA->", c_.D, c_.W_tnt)[0];
    J ww = einsum("aA,aA->", c_.W_tnt, c_.W_tnt)[0];
    return (a - dw * 3.0 - ww).value();
  }

  S I() const {
    need_n(1);
    const double r = k3_over_n4();
    J bracket = LoW_mP() + div(mCa_t_ - DLo_) + trB_ * r - D2_ * (k_ - 3.0);
    J first = (k_ >= 2) ? (-lap(G_) + G_ * trP_ * 2.0) * (k_ - 1.0) : J(0.0);
    return (first + bracket * (k_ - 6.0)).value();
  }
  S I1() const { return (k_ >= 2 ? (-lap(G_) + G_ * trP_ * (k_ - 4.0)) * (k_ - 1.0) : J(0.0)).value(); }
  S I2() const {
    const double q = inv_n4();
    return (div(mCa_t_ - DLo_) + trB_ * ((k_ - 4.0) * 0.5 * q) - D2_ * ((k_ - 4.0) * 0.5)).value();
  }
  S I3() const {
    const double q = inv_n4();
    return (LoW_mP() - G_ * trP_ * (k_ - 1.0) + trB_ * ((k_ - 2.0) * 0.5 * q) - D2_ * ((k_ - 2.0) * 0.5)).value();
  }
  S I_assembled() const { return I1() + (I2() + I3()) * (k_ - 6.0); }

  S Jinv() const {
    need_n(1);
    const double r = k3_over_n4();
    return (J_regular() - trB_ * (2.0 * (k_ - 6.0) * r)).value();
  }
  // (n - 4) times the J invariant, finite at n = 4.
  S Jinv_times_n4() const {
    return (J_regular() * (n_ - 4.0) - trB_ * (2.0 * (k_ - 6.0) * (k_ - 3.0))).value();
  }
  S J1() const { return (-lap(c_.W_trace) + c_.W_trace * trP_ * (k_ - 4.0)).value(); }
  S J2() const { return (div(mCa_t_) + trB_ * ((k_ - 4.0) * 0.5 * inv_n4())).value(); }
  S J3() const {
    T m = c_.W_tt - times(tangent_delta<S>(k_), c_.W_trace * 0.5);
    J a = einsum("ab,ab->", m, c_.mP)[0];
    return (a - LoC() - einsum("aA,aA->", c_.D, c_.W_tnt)[0] - trB_ * ((k_ - 2.0) * 0.5 * inv_n4())).value();
  }
  S J_assembled() const { return J1() - (J2() - J3()) * (2.0 * (k_ - 6.0)); }

  // The combination 2I + J in the form that has no pole at n = 4.
  S two_I_plus_J() const {
    J br = einsum("ab,ab->", c_.Lo2, c_.mP)[0] - div(DLo_) - D2_ * (k_ - 3.0) -
           einsum("aA,aA->", c_.D, c_.W_tnt)[0] - LoC();
    return (-lap(c_.Lo_sq) + c_.Lo_sq * trP_ * 2.0 + br * (2.0 * (k_ - 6.0))).value();
  }

  // Intrinsic fourth-order Q-curvature of the induced metric.
  S Qbar4() const {
    need_k(2, "intrinsic Q4");
    J jb = p_.j_bar[0];
    J pp = einsum("ab,ab->", p_.schouten_bar, p_.schouten_bar)[0];
    return (-lap(jb) - pp * 2.0 + jb * jb * (0.5 * k_)).value();
  }
  S Qdagger() const {
    need_k(3, "Q-dagger");
    need_n(3);
    const double q = inv_n4();
    const T& F = *c_.F;
    J fp = einsum("ab,ab->", F, c_.mP)[0];
    const double a = (k_ - 4.0) * (k_ - 5.0);
    return (lap(G_) * (k_ - 2.0) - div(mCa_t_ - DLo_) * (k_ - 6.0) - G_ * trP_ * (2.0 * (k_ - 4.0)) -
            fp * ((k_ - 4.0) * (k_ - 4.0)) - trB_ * (a * q) + D2_ * a)
        .value();
  }
  S F2() const {
    need_k(3, "|F|^2");
    return einsum("ab,ab->", *c_.F, *c_.F)[0].value();
  }
  S Gv() const {
    need_k(2, "Fialkow trace");
    return G_.value();
  }
  S Q4() const {
    need_k(3, "Q4");
    return Qbar4() + Qdagger() + I() + F2() * 2.0 - G_.value() * G_.value() * (0.5 * k_);
  }
  // The same quantity assembled from the intrinsic Q-curvature plus the
  // extrinsic correction written in intrinsic Schouten terms.
  S Q4_from_intrinsic() const {
    need_k(3, "Q4");
    const double q = inv_n4();
    const T& F = *c_.F;
    J fpb = einsum("ab,ab->", F, p_.schouten_bar)[0];
    J qt = -lap(G_) - einsum("ab,ab->", F, F)[0] * 2.0 + G_ * G_ * (0.5 * k_) - fpb * 4.0 +
           G_ * p_.j_bar[0] * static_cast<double>(k_) - trB_ * (2.0 * q) + D2_ * 2.0;
    return Qbar4() + qt.value();
  }

  // Critical k = 4 decomposition Q = 2 Pf + W_Q + divergence.
  S W_Q() const {
    if (k_ == 2) return (c_.Lo_sq * 0.5 - W_T()).value();
    need_k_eq(4, "W_Q");
    J w2 = einsum("abcd,abcd->", p_.weyl_bar, p_.weyl_bar)[0];
    return w2.value() * -0.25 + I() + F2() * 2.0 - G_.value() * G_.value() * 2.0;
  }
  S Q_divergence() const {
    need_k_eq(4, "Q divergence term");
    T v = grad(p_.j_bar[0]) - grad(G_) * 2.0 - mCa_t_ * 2.0 + DLo_ * 2.0;
    return -div(v).value();
  }
  S Pf() const { return pfaffian_value(); }
  S Q() const {
    if (k_ == 2) return Pf() + W_Q();
    need_k_eq(4, "Q");
    return Pf() * 2.0 + W_Q() + Q_divergence();
  }
  // W(e1, e2, e1, e2) for surfaces.
  S W_T_value() const { return W_T().value(); }

  // Comparison invariants.
  S Wm() const {
    need_k(3, "Wm");
    need_k_ne(6, "Wm");
    const double k = k_, a = (k - 3.0);
    S r = two_I_plus_J() * (k * (k - 1.0) / (4.0 * (k - 6.0))) + K1() * (a / 2.0) -
          K2() * ((k * k - 2.0 * k + 3.0) / (2.0 * (k - 1.0)));
    J poly = -WnWn() * (a / 2.0) - Wtnt2() * (a / 4.0) - LLWtttt() * (a / 2.0) - LLWttnn() * (a / 2.0) -
             Lo2F() * ((k * k - 3.0 * k + 6.0) / 2.0) - G_ * c_.Lo_sq * (k * (k - 1.0) / (2.0 * (k - 6.0))) -
             quartic_a() * (a / 2.0) - quartic_b() * (a / 2.0) + quartic_c() * a;
    return r + poly.value();
  }
  // Specialized display for four-dimensional hypersurfaces.
  S Wm_hypersurface() const {
    if (k_ != 4 || n_ != 5) throw DomainError("Wm hypersurface form needs k = 4, n = 5");
    T lap_lo = einsum("ddabA->abA", cov_bar(p_, cov_bar(p_, p_.Lo)));
    J a = einsum("abA,abA->", p_.Lo, lap_lo)[0];
    T v = einsum("abA,bA->a", p_.Lo, divLo());
    J lc = einsum("abA,aAb->", p_.Lo, blk(p_.cotton, "tnt", k_))[0];
    J lp = einsum("ab,ab->", c_.Lo2, p_.schouten_bar)[0];
    J hl3 = einsum("A,A->", p_.H, trLo3())[0];
    J hlf = einsum("A,abA,ab->", p_.H, p_.Lo, *c_.F)[0];
    return (a * 0.5 + div(v) * (4.0 / 3.0) + lap(c_.Lo_sq) * 1.5 - p_.j_bar[0] * c_.Lo_sq * 3.5 - lc * 6.0 +
            lp * 4.0 - hl3 * 6.0 + hlf * 12.0)
        .value();
  }

  S Juhl1() const {
    need_k(4, "J_1 comparison invariant");
    need_k_ne(6, "J_1 comparison invariant");
    const double k = k_;
    S r = two_I_plus_J() * (-(k - 2.0) / (2.0 * (k - 3.0) * (k - 6.0))) + (K1() + K2()) * ((k - 2.0) / (k - 3.0));
    J poly = Lo2F() * ((k - 2.0) / (k - 3.0)) + Lo2Wtt() + G_ * c_.Lo_sq * ((k - 2.0) / ((k - 3.0) * (k - 6.0))) +
             LLWtttt() - LLWnn() + LLWtntn() * 2.0 - LLWttnn() - Wtnt2() * 0.5 + WnWn();
    return r + poly.value();
  }
  S Juhl1_hypersurface() const {
    need_hypersurface_k(4, "J_1 hypersurface form");
    const double k = k_;
    J a = (lap(c_.Lo_sq) * (k - 4.0) - p_.j_bar[0] * c_.Lo_sq * (k - 2.0)) * (1.0 / ((k - 3.0) * (k - 6.0)));
    J dd = ddLo2();
    J lnw = LoNablaNormalW();
    T dl = divLo();
    J dl2 = einsum("aA,aA->", dl, dl)[0];
    J lp = einsum("ab,ab->", c_.Lo2, p_.schouten_bar)[0];
    J hlw = HLoWtt();
    return (a - dd * (1.0 / (k - 3.0)) + lnw + dl2 * ((k - 2.0) / ((k - 1.0) * (k - 1.0))) -
            lp * ((k - 2.0) / (k - 3.0)) - hlw * 2.0)
        .value();
  }
  S Juhl2() const {
    need_k(4, "J_2 comparison invariant");
    need_k_ne(6, "J_2 comparison invariant");
    const double k = k_;
    S r = two_I_plus_J() * (-1.0 / (2.0 * (k - 3.0) * (k - 6.0))) + (K1() + K2()) * (1.0 / (k - 3.0));
    J poly = -Lo2F() * ((k - 4.0) / (k - 3.0)) + G_ * c_.Lo_sq * (1.0 / ((k - 3.0) * (k - 6.0)));
    return r + poly.value();
  }
  // The H Lo W term carries (k-3)/(k-2): -H^A Lo^{abB} W_{aAbB} - (1/(k-2)) H Lo W_{acb}^c
  // with W_{aAbA} = -W_{acb}^c on a hypersurface.
  S Juhl2_hypersurface() const {
    need_hypersurface_k(4, "J_2 hypersurface form");
    const double k = k_;
    J lnp = einsum("abA,Aab->", p_.Lo, blk(p_.dschouten, "ntt", k_))[0];
    J llp = einsum("abA,abB,AB->", p_.Lo, p_.Lo, blk(p_.schouten, "nn", k_))[0];
    J lddh = einsum("abA,abA->", p_.Lo, cov_bar(p_, c_.dH))[0];
    J hlp = einsum("A,abA,ab->", p_.H, p_.Lo, p_.schouten_bar)[0];
    J lp = einsum("ab,ab->", c_.Lo2, p_.schouten_bar)[0];
    J hl3 = einsum("A,A->", p_.H, trLo3())[0];
    T dl = divLo();
    J dl2 = einsum("aA,aA->", dl, dl)[0];
    J h2 = c_.H_sq;
    return (-lnp - llp + lddh + hlp - ddLo2() * (1.0 / (k - 3.0)) +
            lap(c_.Lo_sq) * ((k - 5.0) / (2.0 * (k - 3.0) * (k - 6.0))) -
            p_.j_bar[0] * c_.Lo_sq * (1.0 / ((k - 3.0) * (k - 6.0))) + lp * ((k - 4.0) / (k - 3.0)) -
            hl3 * ((k - 3.0) / (k - 2.0)) + HLoWtt() * ((k - 3.0) / (k - 2.0)) - h2 * c_.Lo_sq * 1.5 +
            dl2 * (k / ((k - 1.0) * (k - 1.0))))
        .value();
  }

  S N1() const {
    need_k(2, "N_1");
    const double b = (k_ - 6.0) / 2.0;
    J poly = LLWttnn() - WnWn() + Wtnt2() * 0.5 - Lo2Wtt() - LLWtttt() + LLWnn() - LLWtntn() * 2.0;
    return two_I_plus_J() * 0.5 - (K1() + K2()) * b + (poly * b).value();
  }
  S N1_k4() const {
    need_k_eq(4, "N_1 four-dimensional form");
    return (-lap(c_.Lo_sq) * 0.5 + div(DLo_) * 2.0).value() + CHO1();
  }
  S CHO1() const {
    need_k_eq(4, "first CHO scalar");
    const double n = n_;
    J R = scal();
    J ricAA = einsum("AA->", blk(p_.ric, "nn", k_))[0];
    J lr = einsum("ab,ab->", c_.Lo2, blk(p_.ric, "tt", k_))[0];
    J hl3 = einsum("A,A->", p_.H, trLo3())[0];
    return (D2_ * 2.0 + LoNablaNormalW() + R * c_.Lo_sq * (1.0 / (n - 1.0)) - c_.Lo_sq * ricAA * (1.0 / (n - 2.0)) -
            lr * (2.0 / (n - 2.0)) + c_.H_sq * c_.Lo_sq - hl3 * 2.0 - HLoWtt() * 2.0)
        .value();
  }

  S N2() const {
    need_k(2, "N_2");
    if (k_ == 3 || k_ == 6) throw DomainError("N_2 is undefined for k = 3 and k = 6");
    const double k = k_, n = n_, d = (k - 1.0) * (k - 3.0);
    T Wtaa = blk(p_.weyl, "ttaa", k_);
    T Wtata = blk(p_.weyl, "tata", k_);
    T Wn = einsum("cada->cd", blk(p_.weyl, "atat", k_));
    J wsq = einsum("abcd,abcd->", Wtaa, Wtaa)[0] - einsum("acbd,acbd->", Wtata, Wtata)[0] +
            einsum("cd,cd->", Wn, Wn)[0];
    S r = Jinv_times_n4() * (1.0 / ((k - 3.0) * (k - 6.0))) - K1() * (2.0 * (n - k - 1.0) / d) -
          K2() * (2.0 * (n - 5.0 * k + 11.0) / d);
    J poly = -wsq * (2.0 / (k - 1.0)) - WnWn() * (2.0 * (n - 3.0 * k + 5.0) / d) +
             Wtnt2() * ((n - k - 1.0) / d) - LLWtttt() * (2.0 * (n - k - 1.0) / d) -
             Lo2Wtt() * (2.0 * (n - 3.0 * k + 5.0) / d) + LLWttnn() * (2.0 * (n - 5.0 * k + 11.0) / d) +
             LLWnn() * (2.0 * (n - 3.0 * k + 5.0) / d) - LLWtntn() * (4.0 * (n - 2.0 * k + 2.0) / d);
    return r + poly.value();
  }
  S N2_k4() const {
    need_k_eq(4, "N_2 four-dimensional form");
    const double n = n_;
    return (lap(c_.W_trace) * ((3.0 * n - 10.0) / 6.0) - div(mCa_t_) * (4.0 * (n - 5.0) / 3.0)).value() + CHO2();
  }
  S CHO2() const {
    need_k_eq(4, "second CHO scalar");
    if (!p_.ddweyl) throw UsageError("second CHO scalar needs a pack built with ddweyl");
    const double n = n_;
    J nnW = einsum("AAabab->", blk(*p_.ddweyl, "nntttt", k_))[0];
    J hnW = einsum("A,Aabab->", p_.H, blk(p_.dweyl, "ntttt", k_))[0];
    J R = scal();
    J Wtr = c_.W_trace;
    J ricAA = einsum("AA->", blk(p_.ric, "nn", k_))[0];
    J rw = einsum("ab,ab->", blk(p_.ric, "tt", k_), c_.W_tt)[0];
    J wdh = einsum("aA,aA->", c_.W_tnt, c_.dH)[0];
    J dw = einsum("aA,aA->", c_.D, c_.W_tnt)[0];
    return (nnW * (1.0 / 3.0) + hnW * ((n - 10.0) / 3.0) - R * Wtr * ((n - 4.0) / (n - 1.0)) +
            ricAA * Wtr * ((n - 4.0) / (n - 2.0)) + rw * (4.0 * (n - 5.0) / (3.0 * (n - 2.0))) - wdh * (4.0 / 3.0) -
            LoNablaNormalW() * (2.0 * (n - 5.0) / 3.0) + HLoWtt() * (8.0 * (n - 5.0) / 3.0) -
            dw * (4.0 * (n + 1.0) / 3.0) - c_.H_sq * Wtr * (5.0 * (n - 4.0) / 3.0))
        .value();
  }

  // Extrinsic Paneitz-type operators applied to a function on the patch
  // (a jet in the chart variables of the patch).
  S P2(const J& phi) const {
    need_k_eq(2, "P_2");
    return (-lap(phi)).value();
  }
  S Pbar4(const J& phi) const { return Pbar4_signed(phi, kPaneitzSign); }
  S Pbar4_signed(const J& phi, double sign) const {
    need_k_eq(4, "intrinsic Paneitz operator");
    T m = p_.schouten_bar * 4.0 - times(tangent_delta<S>(k_), p_.j_bar[0] * 2.0);
    return (lap(lap(phi)) + div(einsum("ab,b->a", m, grad(phi))) * sign).value();
  }
  S P4(const J& phi) const {
    need_k_eq(4, "P_4");
    T m = *c_.F * 4.0 - times(tangent_delta<S>(k_), G_ * 2.0);
    return Pbar4(phi) + div(einsum("ab,b->a", m, grad(phi))).value();
  }

  // Tangential divergence, gradient and Laplacian along the patch.
  J div(const T& v) const { return einsum("aa->", cov_bar(p_, v))[0]; }
  T grad(const J& f) const { return cov_bar(p_, scalar_tensor(f)); }
  J lap(const J& f) const { return div(grad(f)); }

 private:
  void need_k(int kmin, const char* what) const {
    if (k_ < kmin) throw DomainError(std::string(what) + " needs k >= " + std::to_string(kmin));
  }
  void need_k_eq(int kk, const char* what) const {
    if (k_ != kk) throw DomainError(std::string(what) + " needs k = " + std::to_string(kk));
  }
  void need_k_ne(int kk, const char* what) const {
    if (k_ == kk) throw DomainError(std::string(what) + " is undefined for k = " + std::to_string(kk));
  }
  void need_hypersurface_k(int kmin, const char* what) const {
    need_k(kmin, what);
    need_k_ne(6, what);
    if (n_ != k_ + 1) throw DomainError(std::string(what) + " needs n = k + 1");
  }
  void need_n(int) const {
    if (n_ < 3) throw DomainError("invariants need n >= 3");
  }
  double inv_n4() const {
    if (n_ == 4) throw DomainError("pole at n = 4");
    return 1.0 / (n_ - 4.0);
  }
  double k3_over_n4() const {
    if (n_ == 4) {
      if (k_ == 3 && opt_.k3n4_convention) return 1.0;
      throw DomainError("pole at n = 4");
    }
    return (k_ - 3.0) / (n_ - 4.0);
  }

  // The part of the J invariant without the Bach term.
  J J_regular() const {
    J br = div(mCa_t_) - einsum("ab,ab->", c_.mP, c_.W_tt)[0] + einsum("aA,aA->", c_.D, c_.W_tnt)[0] + LoC();
    return -lap(c_.W_trace) + c_.W_trace * trP_ * 2.0 - br * (2.0 * (k_ - 6.0));
  }
  J LoC() const { return einsum("abA,aAb->", p_.Lo, blk(c_.mC, "tnt", k_))[0]; }
  J LoW_mP() const { return einsum("ab,ab->", c_.Lo2 - c_.W_tt, c_.mP)[0]; }
  J W_T() const { return Wt_(0, 1, 0, 1); }
  J scal() const { return p_.j[0] * (2.0 * (n_ - 1.0)); }
  J pfaffian_jet() const { return pfaffian_bar(p_); }
  S pfaffian_value() const {
    if (k_ != 2 && k_ != 4) throw DomainError("Pfaffian needs k = 2 or k = 4");
    return pfaffian_bar(p_).value();
  }

  // W_{a b A}^b W^{a c A}_c
  J WnWn() const { return einsum("aA,aA->", c_.W_tnt, c_.W_tnt)[0]; }
  // W_{a b A c} W^{a b A c}
  J Wtnt2() const { return einsum("abAc,abAc->", Wttnt_, Wttnt_)[0]; }
  // W_{abcd} Lo^{acA} Lo^{bd}_A
  J LLWtttt() const { return einsum("abcd,acA,bdA->", Wt_, p_.Lo, p_.Lo)[0]; }
  // W_{a b A B} Lo^{c a A} Lo_c^{b B}
  J LLWttnn() const { return einsum("abAB,caA,cbB->", Wttnn_, p_.Lo, p_.Lo)[0]; }
  // W_{a A b B} Lo^{c a A} Lo_c^{b B}
  J LLWtntn() const { return einsum("aAbB,caA,cbB->", Wtntn_, p_.Lo, p_.Lo)[0]; }
  // Lo^{a b A} Lo_{a b}^B W_{A c B}^c
  J LLWnn() const {
    T wn = einsum("AcBc->AB", blk(p_.weyl, "ntnt", k_));
    return einsum("abA,abB,AB->", p_.Lo, p_.Lo, wn)[0];
  }
  J Lo2F() const { return einsum("ab,ab->", c_.Lo2, *c_.F)[0]; }
  J Lo2Wtt() const { return einsum("ab,ab->", c_.Lo2, c_.W_tt)[0]; }
  // Lo^{abA} Lo_{ab}^B Lo^{cdB} Lo_{cdA}
  J quartic_a() const {
    T m = einsum("abA,abB->AB", p_.Lo, p_.Lo);
    return einsum("AB,AB->", m, m)[0];
  }
  J quartic_b() const { return einsum("ab,ab->", c_.Lo2, c_.Lo2)[0]; }
  // Lo^{abA} Lo^{cd}_A Lo_{acB} Lo_{bd}^B
  J quartic_c() const {
    T m = einsum("abA,cdA->abcd", p_.Lo, p_.Lo);
    T q = einsum("acB,bdB->abcd", p_.Lo, p_.Lo);
    return einsum("abcd,abcd->", m, q)[0];
  }
  // tr Lo^3 indexed by the free normal slot.
  T trLo3() const { return einsum("abB,bcB,caA->A", p_.Lo, p_.Lo, p_.Lo); }
  // nabla-bar^b Lo_{b a A}
  T divLo() const { return einsum("bbaA->aA", cov_bar(p_, p_.Lo)); }
  J ddLo2() const { return einsum("abab->", cov_bar(p_, cov_bar(p_, c_.Lo2)))[0]; }
  // Lo^{abA} (nabla_A W)_{a c b}^c
  J LoNablaNormalW() const {
    T dW = einsum("Aacbc->Aab", blk(p_.dweyl, "ntttt", k_));
    return einsum("abA,Aab->", p_.Lo, dW)[0];
  }
  J HLoWtt() const { return einsum("A,abA,ab->", p_.H, p_.Lo, c_.W_tt)[0]; }

  const SubmanifoldPack<S>& p_;
  ConformalTensors<S> c_;
  InvariantOptions opt_;
  int k_, n_;
  T Wt_, Wttnt_, Wttnn_, Wtntn_, mCa_t_, DLo_;
  J trP_, trB_, D2_, G_;
};

}  // namespace qgeo

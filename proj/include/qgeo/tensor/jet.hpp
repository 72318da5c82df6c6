#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "qgeo/errors.hpp"
#include "qgeo/tensor/dual.hpp"

namespace qgeo {

inline int jet_order_max() {
  static const int cap = [] {
    if (const char* s = std::getenv("QGEO_JET_ORDER_MAX")) {
      const int v = std::atoi(s);
      if (v > 0) return v;
    }
    return 5;
  }();
  return cap;
}

constexpr int kMaxJetVars = 9;

// Monomial tables for jets in `nvars` variables truncated at total degree `order`.
// Monomials are graded: every degree-d block precedes degree d+1, so a jet of
// lower order is a prefix of the coefficient array.
class JetSpace {
 public:
  struct Product {
    int a, b, r;
  };

  static const JetSpace& get(int nvars, int order) {
    if (nvars < 1 || nvars > kMaxJetVars)
      throw ConfigError("jet: nvars " + std::to_string(nvars) + " outside [1, 9]");
    if (order < 0 || order > jet_order_max())
      throw ConfigError("jet: order " + std::to_string(order) + " exceeds budget " +
                        std::to_string(jet_order_max()));
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<JetSpace>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{nvars, order}];
    if (!slot) slot.reset(new JetSpace(nvars, order));
    return *slot;
  }

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(deg_.size()); }
  int size(int ord) const { return count_[std::clamp(ord, 0, order_)]; }
  int degree(int m) const { return deg_[m]; }
  int exponent(int m, int v) const { return exps_[m * nvars_ + v]; }
  // Index of monomial m + e_v, or -1 past the truncation order.
  int up(int m, int v) const { return up_[m * nvars_ + v]; }
  // Monomial m (degree >= 1) equals parent(m) + e_{parent_var(m)}.
  int parent(int m) const { return parent_[m]; }
  int parent_var(int m) const { return parent_var_[m]; }
  const std::vector<Product>& products() const { return prod_; }
  // Number of product entries whose result has degree <= ord.
  int products_end(int ord) const { return prod_end_[std::clamp(ord, 0, order_)]; }
  int index(const std::vector<int>& e) const {
    auto it = lookup_.find(e);
    return it == lookup_.end() ? -1 : it->second;
  }

 private:
  JetSpace(int nvars, int order) : nvars_(nvars), order_(order) {
    std::vector<std::vector<int>> mons;
    for (int d = 0; d <= order; ++d) {
      std::vector<int> e(nvars, 0);
      enumerate(e, 0, d, mons);
      count_.push_back(static_cast<int>(mons.size()));
    }
    for (std::size_t m = 0; m < mons.size(); ++m) {
      lookup_[mons[m]] = static_cast<int>(m);
      int d = 0;
      for (int x : mons[m]) d += x;
      deg_.push_back(d);
      exps_.insert(exps_.end(), mons[m].begin(), mons[m].end());
    }
    const int nm = size();
    up_.assign(nm * nvars, -1);
    parent_.assign(nm, -1);
    parent_var_.assign(nm, -1);
    for (int m = 0; m < nm; ++m) {
      for (int v = 0; v < nvars; ++v) {
        auto e = mons[m];
        ++e[v];
        up_[m * nvars + v] = index(e);
      }
      for (int v = 0; v < nvars && m > 0; ++v) {
        if (mons[m][v] > 0) {
          auto e = mons[m];
          --e[v];
          parent_[m] = index(e);
          parent_var_[m] = v;
          break;
        }
      }
    }
    for (int a = 0; a < nm; ++a)
      for (int b = 0; b < nm; ++b) {
        if (deg_[a] + deg_[b] > order) continue;
        std::vector<int> e(nvars);
        for (int v = 0; v < nvars; ++v) e[v] = mons[a][v] + mons[b][v];
        prod_.push_back({a, b, index(e)});
      }
    std::stable_sort(prod_.begin(), prod_.end(),
                     [&](const Product& x, const Product& y) { return deg_[x.r] < deg_[y.r]; });
    prod_end_.assign(order + 1, 0);
    for (int d = 0; d <= order; ++d)
      prod_end_[d] = static_cast<int>(
          std::count_if(prod_.begin(), prod_.end(), [&](const Product& p) { return deg_[p.r] <= d; }));
  }

  static void enumerate(std::vector<int>& e, int v, int left, std::vector<std::vector<int>>& out) {
    const int n = static_cast<int>(e.size());
    if (v == n - 1) {
      e[v] = left;
      out.push_back(e);
      e[v] = 0;
      return;
    }
    for (int x = left; x >= 0; --x) {
      e[v] = x;
      enumerate(e, v + 1, left - x, out);
    }
    e[v] = 0;
  }

  int nvars_, order_;
  std::vector<int> count_, deg_, exps_, up_, parent_, parent_var_, prod_end_;
  std::vector<Product> prod_;
  std::map<std::vector<int>, int> lookup_;
};

// Truncated Taylor polynomial about a base point. Coefficient m is
// (1/m!) * d^m f, so the value is coefficient 0. A jet without a space is a
// constant, valid to every order.
template <class S>
class Jet {
 public:
  static constexpr int kExact = std::numeric_limits<int>::max();

  Jet() : c_(1, S(0.0)) {}
  Jet(double c) : c_(1, S(c)) {}
  template <class T = S, class = std::enable_if_t<!std::is_same_v<T, double>>>
  Jet(const S& c) : c_(1, c) {}
  Jet(const JetSpace& sp, int ord) : sp_(&sp), ord_(std::min(ord, sp.order())), c_(sp.size(ord_), S(0.0)) {}

  // The coordinate function x_v near the base value x0.
  static Jet variable(const JetSpace& sp, int v, const S& x0) {
    Jet j(sp, sp.order());
    j.c_[0] = x0;
    if (sp.order() >= 1) j.c_[1 + v] = S(1.0);
    return j;
  }

  const JetSpace* space() const { return sp_; }
  bool is_constant() const { return sp_ == nullptr; }
  int order() const { return sp_ ? ord_ : kExact; }
  int size() const { return static_cast<int>(c_.size()); }
  const S& value() const { return c_[0]; }
  S& operator[](int m) { return c_[m]; }
  const S& operator[](int m) const { return c_[m]; }
  const std::vector<S>& coeffs() const { return c_; }

  // Coefficient of the given multi-index (Taylor coefficient, not the partial).
  S coeff(const std::vector<int>& e) const {
    if (!sp_) {
      for (int x : e)
        if (x) return S(0.0);
      return c_[0];
    }
    const int m = sp_->index(e);
    return (m >= 0 && m < size()) ? c_[m] : S(0.0);
  }

  // Partial derivative d^e f at the base point.
  S partial(const std::vector<int>& e) const {
    double f = 1.0;
    for (int x : e)
      for (int i = 2; i <= x; ++i) f *= i;
    return coeff(e) * f;
  }

  Jet truncated(int ord) const {
    if (!sp_ || ord >= ord_) return *this;
    Jet r = *this;
    r.ord_ = std::max(ord, 0);
    r.c_.resize(sp_->size(r.ord_));
    return r;
  }

  Jet& operator+=(const Jet& o) { return axpy(S(1.0), o); }
  Jet& operator-=(const Jet& o) { return axpy(S(-1.0), o); }
  Jet& operator*=(const S& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }

  // this += s * o
  Jet& axpy(const S& s, const Jet& o) {
    if (!o.sp_) {
      c_[0] += s * o.c_[0];
      return *this;
    }
    adopt(o.sp_, o.ord_);
    for (int m = 0; m < size(); ++m) c_[m] += s * o.c_[m];
    return *this;
  }

  // this += a * b, truncated to the common order.
  Jet& add_product(const Jet& a, const Jet& b) {
    if (!a.sp_) return axpy(a.c_[0], b);
    if (!b.sp_) return axpy(b.c_[0], a);
    adopt(a.sp_, std::min(a.ord_, b.ord_));
    const auto& tab = a.sp_->products();
    const int end = a.sp_->products_end(ord_);
    for (int p = 0; p < end; ++p) c_[tab[p].r] += a.c_[tab[p].a] * b.c_[tab[p].b];
    return *this;
  }

  Jet derivative(int v) const {
    if (!sp_) return Jet();
    if (ord_ == 0) throw ConfigError("jet: derivative of an order-0 jet exhausts the budget");
    Jet r(*sp_, ord_ - 1);
    for (int m = 0; m < r.size(); ++m) {
      const int u = sp_->up(m, v);
      r.c_[m] = c_[u] * double(sp_->exponent(u, v));
    }
    return r;
  }

  // Apply f with derivatives d[j] = f^{(j)}(value), j = 0..order.
  template <class Derivs>
  Jet apply(Derivs&& derivs) const {
    if (!sp_) return Jet(derivs(c_[0], 0)[0]);
    const std::vector<S> d = derivs(c_[0], ord_);
    Jet delta = *this;
    delta.c_[0] = S(0.0);
    Jet r(*sp_, ord_);
    r.c_[0] = d[0];
    Jet power = delta;
    double fact = 1.0;
    for (int j = 1; j <= ord_; ++j) {
      fact *= j;
      r.axpy(d[j] / fact, power);
      if (j < ord_) {
        Jet next(*sp_, ord_);
        next.add_product(power, delta);
        power = std::move(next);
      }
    }
    return r;
  }

 private:
  void adopt(const JetSpace* sp, int ord) {
    if (!sp_) {
      const S c0 = c_[0];
      sp_ = sp;
      ord_ = ord;
      c_.assign(sp->size(ord), S(0.0));
      c_[0] = c0;
      return;
    }
    if (sp_ != sp) throw UsageError("jet: mixing jets over different variable sets");
    if (ord < ord_) {
      ord_ = ord;
      c_.resize(sp_->size(ord_));
    }
  }

  const JetSpace* sp_ = nullptr;
  int ord_ = kExact;
  std::vector<S> c_;
};

template <class S> Jet<S> operator+(Jet<S> a, const Jet<S>& b) { return a += b; }
template <class S> Jet<S> operator-(Jet<S> a, const Jet<S>& b) { return a -= b; }
template <class S> Jet<S> operator-(Jet<S> a) { return a *= S(-1.0); }
template <class S> Jet<S> operator*(const Jet<S>& a, const Jet<S>& b) {
  Jet<S> r;
  r.add_product(a, b);
  return r;
}
template <class S> Jet<S> operator*(Jet<S> a, double s) { return a *= S(s); }
template <class S> Jet<S> operator*(double s, Jet<S> a) { return a *= S(s); }
template <class S> Jet<S> operator+(Jet<S> a, double s) { return a += Jet<S>(s); }
template <class S> Jet<S> operator+(double s, Jet<S> a) { return a += Jet<S>(s); }
template <class S> Jet<S> operator-(Jet<S> a, double s) { return a -= Jet<S>(s); }
template <class S> Jet<S> operator-(double s, const Jet<S>& a) { return Jet<S>(s) - a; }

template <class S> Jet<S> reciprocal(const Jet<S>& a) {
  return a.apply([](const S& x, int n) {
    if (value_of(x) == 0.0) throw NumericError("jet: reciprocal of zero");
    std::vector<S> d(n + 1);
    S inv = S(1.0) / x;
    d[0] = inv;
    for (int j = 1; j <= n; ++j) d[j] = d[j - 1] * inv * double(-j);
    return d;
  });
}
template <class S> Jet<S> operator/(const Jet<S>& a, const Jet<S>& b) { return a * reciprocal(b); }
template <class S> Jet<S> operator/(const Jet<S>& a, double s) { return a * (1.0 / s); }
template <class S> Jet<S> operator/(double s, const Jet<S>& b) { return reciprocal(b) * s; }

template <class S> Jet<S> exp(const Jet<S>& a) {
  return a.apply([](const S& x, int n) { return std::vector<S>(n + 1, scalar_exp(x)); });
}
template <class S> Jet<S> log(const Jet<S>& a) {
  return a.apply([](const S& x, int n) {
    if (!(value_of(x) > 0.0)) throw NumericError("jet: log of non-positive value");
    std::vector<S> d(n + 1);
    d[0] = scalar_log(x);
    S inv = S(1.0) / x, p = inv;
    for (int j = 1; j <= n; ++j) {
      d[j] = p;
      p = p * inv * double(-j);
    }
    return d;
  });
}
// a^p for real p; needs a positive base value unless p is a non-negative integer.
template <class S> Jet<S> pow(const Jet<S>& a, double p) {
  return a.apply([p](const S& x, int n) {
    std::vector<S> d(n + 1);
    double coef = 1.0;
    for (int j = 0; j <= n; ++j) {
      const double e = p - j;
      if (coef == 0.0 || (value_of(x) == 0.0 && e < 0))
        d[j] = S(coef == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN());
      else if (e == std::floor(e) && e >= 0) {
        S r(1.0);
        for (int i = 0; i < int(e); ++i) r = r * x;
        d[j] = r * coef;
      } else {
        if (!(value_of(x) > 0.0)) throw NumericError("jet: fractional power of non-positive value");
        d[j] = scalar_pow(x, e) * coef;
      }
      coef *= e;
    }
    return d;
  });
}
template <class S> Jet<S> sqrt(const Jet<S>& a) {
  if (!(value_of(a.value()) > 0.0)) throw NumericError("jet: sqrt of non-positive value");
  return pow(a, 0.5);
}
template <class S> Jet<S> sin(const Jet<S>& a) {
  return a.apply([](const S& x, int n) {
    std::vector<S> d(n + 1);
    const S s = scalar_sin(x), c = scalar_cos(x);
    for (int j = 0; j <= n; ++j) d[j] = (j % 4 == 0) ? s : (j % 4 == 1) ? c : (j % 4 == 2) ? -s : -c;
    return d;
  });
}
template <class S> Jet<S> cos(const Jet<S>& a) {
  return a.apply([](const S& x, int n) {
    std::vector<S> d(n + 1);
    const S s = scalar_sin(x), c = scalar_cos(x);
    for (int j = 0; j <= n; ++j) d[j] = (j % 4 == 0) ? c : (j % 4 == 1) ? -s : (j % 4 == 2) ? -c : s;
    return d;
  });
}
template <class S> Jet<S> square(const Jet<S>& a) { return a * a; }

// Substitution of jets: given f as a jet in n variables about x0 and the
// displacements u_a(y) - x0_a as jets in k variables with zero value, builds
// every monomial u^m once and evaluates any f over the same displacement.
class Composer {
 public:
  Composer(const JetSpace& xspace, int xorder, std::vector<Jet<double>> du) : xs_(&xspace), du_(std::move(du)) {
    if (static_cast<int>(du_.size()) != xspace.nvars())
      throw UsageError("compose: displacement count does not match jet variables");
    for (const auto& u : du_)
      if (u.value() != 0.0) throw UsageError("compose: displacement must vanish at the base point");
    const int nm = xspace.size(xorder);
    pw_.resize(nm);
    pw_[0] = Jet<double>(1.0);
    for (int m = 1; m < nm; ++m) {
      Jet<double> r;
      r.add_product(pw_[xspace.parent(m)], du_[xspace.parent_var(m)]);
      pw_[m] = std::move(r);
    }
  }

  template <class S>
  Jet<S> operator()(const Jet<S>& f) const {
    if (f.is_constant()) return f;
    if (f.space() != xs_) throw UsageError("compose: jet over unexpected variable set");
    const int nm = std::min<int>(f.size(), static_cast<int>(pw_.size()));
    int ord = f.order();
    for (const auto& u : du_) ord = std::min(ord, u.order());
    const JetSpace* ys = nullptr;
    for (const auto& u : du_)
      if (u.space()) ys = u.space();
    if (!ys) return Jet<S>(f.value());
    Jet<S> r(*ys, ord);
    r[0] = f[0];
    for (int m = 1; m < nm; ++m) {
      const Jet<double>& p = pw_[m];
      if (p.is_constant()) continue;
      const int lim = std::min(r.size(), p.size());
      const S fm = f[m];
      for (int q = 0; q < lim; ++q) r[q] += fm * p[q];
    }
    return r;
  }

 private:
  const JetSpace* xs_;
  std::vector<Jet<double>> du_;
  std::vector<Jet<double>> pw_;
};

template <class S> Jet<S> promote(const Jet<double>& a);
template <> inline Jet<double> promote<double>(const Jet<double>& a) { return a; }
template <> inline Jet<Dual> promote<Dual>(const Jet<double>& a) {
  if (a.is_constant()) return Jet<Dual>(Dual(a.value()));
  Jet<Dual> r(*a.space(), a.order());
  for (int m = 0; m < a.size(); ++m) r[m] = Dual(a[m]);
  return r;
}

// Value (t = 0) and t-derivative parts of a dual jet.
inline Jet<double> real_part(const Jet<Dual>& a) {
  if (a.is_constant()) return Jet<double>(a.value().v);
  Jet<double> r(*a.space(), a.order());
  for (int m = 0; m < a.size(); ++m) r[m] = a[m].v;
  return r;
}
inline Jet<double> eps_part(const Jet<Dual>& a) {
  if (a.is_constant()) return Jet<double>(a.value().d);
  Jet<double> r(*a.space(), a.order());
  for (int m = 0; m < a.size(); ++m) r[m] = a[m].d;
  return r;
}

// Jet of an arbitrary expression in the coordinates about x0.
template <class S, class F>
auto jet_eval(F&& expr, const std::vector<double>& x0, int order) {
  const JetSpace& sp = JetSpace::get(static_cast<int>(x0.size()), order);
  std::vector<Jet<S>> x;
  for (int v = 0; v < static_cast<int>(x0.size()); ++v) x.push_back(Jet<S>::variable(sp, v, S(x0[v])));
  return expr(x);
}

}  // namespace qgeo

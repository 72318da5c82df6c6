#pragma once

#include <cmath>
#include <ostream>

namespace qgeo {

// First-order nilpotent number v + d*t with t^2 = 0.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}
  constexpr Dual(double value, double eps) : v(value), d(eps) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.v;
    d = (d - v * o.d * inv) * inv;
    v *= inv;
    return *this;
  }
};

inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator+(Dual a, double b) { a.v += b; return a; }
inline Dual operator+(double b, Dual a) { a.v += b; return a; }
inline Dual operator-(Dual a, double b) { a.v -= b; return a; }
inline Dual operator-(double b, const Dual& a) { return {b - a.v, -a.d}; }
inline Dual operator*(const Dual& a, double b) { return {a.v * b, a.d * b}; }
inline Dual operator*(double b, const Dual& a) { return {a.v * b, a.d * b}; }
inline Dual operator/(const Dual& a, double b) { return {a.v / b, a.d / b}; }
inline Dual operator/(double b, const Dual& a) { return Dual(b) / a; }
inline bool operator==(const Dual& a, const Dual& b) { return a.v == b.v && a.d == b.d; }

inline Dual exp(const Dual& a) { const double e = std::exp(a.v); return {e, e * a.d}; }
inline Dual log(const Dual& a) { return {std::log(a.v), a.d / a.v}; }
inline Dual sqrt(const Dual& a) { const double s = std::sqrt(a.v); return {s, 0.5 * a.d / s}; }
inline Dual sin(const Dual& a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual cos(const Dual& a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
inline Dual pow(const Dual& a, double p) {
  const double q = std::pow(a.v, p - 1.0);
  return {q * a.v, p * q * a.d};
}

inline std::ostream& operator<<(std::ostream& os, const Dual& a) {
  return os << a.v << (a.d < 0 ? "-" : "+") << std::abs(a.d) << "t";
}

// Scalar helpers shared by double and Dual.
inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }
inline double eps_of(double) { return 0.0; }
inline double eps_of(const Dual& x) { return x.d; }

template <class S> inline S scalar_exp(const S& x) { using std::exp; return exp(x); }
template <class S> inline S scalar_log(const S& x) { using std::log; return log(x); }
template <class S> inline S scalar_sqrt(const S& x) { using std::sqrt; return sqrt(x); }
template <class S> inline S scalar_sin(const S& x) { using std::sin; return sin(x); }
template <class S> inline S scalar_cos(const S& x) { using std::cos; return cos(x); }
template <class S> inline S scalar_pow(const S& x, double p) { using std::pow; return pow(x, p); }

}  // namespace qgeo

#pragma once

// Forward-mode dual numbers: value plus first derivative. Used to get exact
// t-derivatives of the closed-form candidate functions.

#include <cmath>
#include <type_traits>

namespace harnack {

template <class T>
struct Dual {
  T v{};
  T d{};

  constexpr Dual() = default;
  constexpr Dual(T value) : v(value), d(0) {}  // NOLINT: constants promote implicitly
  constexpr Dual(T value, T deriv) : v(value), d(deriv) {}

  static constexpr Dual variable(T value) { return Dual(value, T(1)); }

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
};

template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator+(Dual<T> a, const Dual<T>& b) { return a += b; }
template <class T> Dual<T> operator-(Dual<T> a, const Dual<T>& b) { return a -= b; }
template <class T> Dual<T> operator*(Dual<T> a, const Dual<T>& b) { return a *= b; }
template <class T> Dual<T> operator/(Dual<T> a, const Dual<T>& b) { return a /= b; }

// mixed scalar arithmetic (any arithmetic scalar)
#define HARNACK_DUAL_MIXED(op)                                                  \
  template <class T, class S, class = std::enable_if_t<std::is_arithmetic_v<S>>> \
  Dual<T> operator op(const Dual<T>& a, S s) { return a op Dual<T>(T(s)); }       \
  template <class T, class S, class = std::enable_if_t<std::is_arithmetic_v<S>>> \
  Dual<T> operator op(S s, const Dual<T>& a) { return Dual<T>(T(s)) op a; }
HARNACK_DUAL_MIXED(+)
HARNACK_DUAL_MIXED(-)
HARNACK_DUAL_MIXED(*)
HARNACK_DUAL_MIXED(/)
#undef HARNACK_DUAL_MIXED

template <class T> Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  T e = exp(a.v);
  return {e, e * a.d};
}
template <class T> Dual<T> expm1(const Dual<T>& a) {
  using std::exp;
  using std::expm1;
  return {expm1(a.v), exp(a.v) * a.d};
}
template <class T> Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.v), a.d / a.v};
}
template <class T> Dual<T> log1p(const Dual<T>& a) {
  using std::log1p;
  return {log1p(a.v), a.d / (T(1) + a.v)};
}
template <class T> Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  T s = sqrt(a.v);
  return {s, a.d / (T(2) * s)};
}
template <class T> Dual<T> sinh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return {sinh(a.v), cosh(a.v) * a.d};
}
template <class T> Dual<T> cosh(const Dual<T>& a) {
  using std::cosh;
  using std::sinh;
  return {cosh(a.v), sinh(a.v) * a.d};
}
template <class T> Dual<T> tanh(const Dual<T>& a) {
  using std::tanh;
  T th = tanh(a.v);
  return {th, (T(1) - th * th) * a.d};
}
template <class T> Dual<T> pow(const Dual<T>& a, T p) {
  using std::pow;
  return {pow(a.v, p), p * pow(a.v, p - T(1)) * a.d};
}

template <class T> T value_of(const T& x) { return x; }
template <class T> T value_of(const Dual<T>& x) { return x.v; }

}  // namespace harnack

#pragma once

#include <cmath>
#include <type_traits>

namespace hardy {

/// Forward-mode dual number a + b·ε with ε² = 0.
///
/// Nesting (`Dual<Dual<double>>`) yields second derivatives along one direction.
template <class T>
struct Dual {
  T v{};  // primal
  T d{};  // tangent

  constexpr Dual() = default;
  constexpr Dual(double x) : v(x), d(0.0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T value, T tangent) : v(value), d(tangent) {}

  static constexpr Dual variable(T x) { return Dual(x, T(1.0)); }

  Dual& operator+=(const Dual& o) { v = v + o.v; d = d + o.d; return *this; }
  Dual& operator-=(const Dual& o) { v = v - o.v; d = d - o.d; return *this; }
  Dual& operator*=(const Dual& o) { *this = *this * o; return *this; }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

/// Primal value as a plain double, through any nesting depth.
inline double primal(double x) { return x; }
template <class T>
double primal(const Dual<T>& x) { return primal(x.v); }

template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a) { return {-a.v, -a.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

template <class T> Dual<T> operator+(const Dual<T>& a, double b) { return {a.v + b, a.d}; }
template <class T> Dual<T> operator+(double a, const Dual<T>& b) { return {a + b.v, b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, double b) { return {a.v - b, a.d}; }
template <class T> Dual<T> operator-(double a, const Dual<T>& b) { return {a - b.v, -b.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return {a.v * b, a.d * b}; }
template <class T> Dual<T> operator*(double a, const Dual<T>& b) { return {a * b.v, a * b.d}; }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return {a.v / b, a.d / b}; }
template <class T> Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

template <class T> bool operator<(const Dual<T>& a, double b) { return primal(a) < b; }
template <class T> bool operator>(const Dual<T>& a, double b) { return primal(a) > b; }
template <class T> bool operator<=(const Dual<T>& a, double b) { return primal(a) <= b; }
template <class T> bool operator>=(const Dual<T>& a, double b) { return primal(a) >= b; }

using std::exp;
using std::log;
using std::pow;
using std::sqrt;

template <class T> Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return {e, e * a.d};
}
template <class T> Dual<T> log(const Dual<T>& a) { return {log(a.v), a.d / a.v}; }
template <class T> Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
template <class T> Dual<T> pow(const Dual<T>& a, double k) {
  if (k == 0.0) return Dual<T>(1.0);
  return {pow(a.v, k), k * pow(a.v, k - 1.0) * a.d};
}

}  // namespace hardy

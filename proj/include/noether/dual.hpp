#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "noether/errors.hpp"

namespace noether {

/// Vector-forward dual number: one value plus one derivative slot per active
/// variable. An empty derivative vector stands for "all slots zero", so
/// constants stay cheap. Nesting Dual<Dual<double>> gives second derivatives.
template <class T>
struct Dual {
  T v{};
  std::vector<T> d;  // empty == identically zero

  Dual() = default;
  Dual(double c) : v(c) {}  // NOLINT: implicit by design, constants promote
  Dual(T value, std::vector<T> deriv) : v(std::move(value)), d(std::move(deriv)) {}

  std::size_t width() const { return d.size(); }
};

using D1 = Dual<double>;
using D2 = Dual<Dual<double>>;

// ---- numeric value extraction (recurses to the underlying double) ----

inline double value(double x) { return x; }
template <class T>
double value(const Dual<T>& x) {
  return value(x.v);
}

inline bool all_zero(double x) { return x == 0.0; }
template <class T>
bool all_zero(const Dual<T>& x) {
  if (!all_zero(x.v)) return false;
  for (const T& s : x.d)
    if (!all_zero(s)) return false;
  return true;
}

/// True when x carries no derivative information at any nesting level.
inline bool is_const(double) { return true; }
template <class T>
bool is_const(const Dual<T>& x) {
  if (!is_const(x.v)) return false;
  for (const T& s : x.d)
    if (!all_zero(s)) return false;
  return true;
}

namespace detail {
template <class T>
const T& slot(const std::vector<T>& d, std::size_t i) {
  static const T zero{};
  return i < d.size() ? d[i] : zero;
}
inline std::size_t joint_width(std::size_t a, std::size_t b) {
  return a > b ? a : b;
}
}  // namespace detail

// ---- arithmetic ----

template <class T>
Dual<T> operator-(const Dual<T>& a) {
  Dual<T> r;
  r.v = -a.v;
  r.d.reserve(a.d.size());
  for (const T& s : a.d) r.d.push_back(-s);
  return r;
}

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v + b.v;
  const std::size_t n = detail::joint_width(a.d.size(), b.d.size());
  r.d.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    r.d[i] = detail::slot(a.d, i) + detail::slot(b.d, i);
  return r;
}

template <class T>
Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v - b.v;
  const std::size_t n = detail::joint_width(a.d.size(), b.d.size());
  r.d.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    r.d[i] = detail::slot(a.d, i) - detail::slot(b.d, i);
  return r;
}

template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) {
  Dual<T> r;
  r.v = a.v * b.v;
  const std::size_t n = detail::joint_width(a.d.size(), b.d.size());
  r.d.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    r.d[i] = detail::slot(a.d, i) * b.v + a.v * detail::slot(b.d, i);
  return r;
}

template <class T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  if (value(b.v) == 0.0) throw DomainError("division by zero");
  Dual<T> r;
  r.v = a.v / b.v;
  const std::size_t n = detail::joint_width(a.d.size(), b.d.size());
  r.d.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    r.d[i] = (detail::slot(a.d, i) - r.v * detail::slot(b.d, i)) / b.v;
  return r;
}

template <class T> Dual<T> operator+(const Dual<T>& a, double b) { return a + Dual<T>(b); }
template <class T> Dual<T> operator+(double a, const Dual<T>& b) { return Dual<T>(a) + b; }
template <class T> Dual<T> operator-(const Dual<T>& a, double b) { return a - Dual<T>(b); }
template <class T> Dual<T> operator-(double a, const Dual<T>& b) { return Dual<T>(a) - b; }
template <class T> Dual<T> operator*(const Dual<T>& a, double b) { return a * Dual<T>(b); }
template <class T> Dual<T> operator*(double a, const Dual<T>& b) { return Dual<T>(a) * b; }
template <class T> Dual<T> operator/(const Dual<T>& a, double b) { return a / Dual<T>(b); }
template <class T> Dual<T> operator/(double a, const Dual<T>& b) { return Dual<T>(a) / b; }

// ---- elementary functions (double overloads carry the domain checks) ----

inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double cosh(double x) { return std::cosh(x); }
inline double exp(double x) { return std::exp(x); }

inline double log(double x) {
  if (!(x > 0.0)) throw DomainError("log of non-positive value");
  return std::log(x);
}

inline double sqrt(double x) {
  if (x < 0.0) throw DomainError("sqrt of negative value");
  return std::sqrt(x);
}

inline double abs(double x) { return std::abs(x); }

inline double atan2(double y, double x) {
  if (x == 0.0 && y == 0.0) throw DomainError("atan2 at the origin");
  return std::atan2(y, x);
}

namespace detail {
// Chain rule helper: lift a function given its value and inner derivative.
template <class T, class FV>
Dual<T> lift(const Dual<T>& a, T fv, FV&& dfv) {
  Dual<T> r;
  r.v = std::move(fv);
  r.d.resize(a.d.size());
  for (std::size_t i = 0; i < a.d.size(); ++i) r.d[i] = a.d[i] * dfv;
  return r;
}
}  // namespace detail

template <class T> Dual<T> sin(const Dual<T>& a) { return detail::lift(a, sin(a.v), cos(a.v)); }
template <class T> Dual<T> cos(const Dual<T>& a) { return detail::lift(a, cos(a.v), -sin(a.v)); }
template <class T> Dual<T> sinh(const Dual<T>& a) { return detail::lift(a, sinh(a.v), cosh(a.v)); }
template <class T> Dual<T> cosh(const Dual<T>& a) { return detail::lift(a, cosh(a.v), sinh(a.v)); }
template <class T> Dual<T> exp(const Dual<T>& a) {
  T e = exp(a.v);
  return detail::lift(a, e, e);
}
template <class T> Dual<T> log(const Dual<T>& a) {
  T lv = log(a.v);  // checks positivity at the double level
  return detail::lift(a, std::move(lv), 1.0 / a.v);
}

template <class T>
Dual<T> tan(const Dual<T>& a) {
  T c = cos(a.v);
  return detail::lift(a, tan(a.v), 1.0 / (c * c));
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  T s = sqrt(a.v);
  if (value(s) == 0.0 && !a.d.empty()) throw DomainError("sqrt derivative at zero");
  Dual<T> r;
  r.v = s;
  r.d.resize(a.d.size());
  for (std::size_t i = 0; i < a.d.size(); ++i) r.d[i] = a.d[i] / (2.0 * s);
  return r;
}

// The derivative of |x| at 0 is taken to be 0.
template <class T>
Dual<T> abs(const Dual<T>& a) {
  double s = value(a.v) > 0.0 ? 1.0 : (value(a.v) < 0.0 ? -1.0 : 0.0);
  return detail::lift(a, abs(a.v), T(s));
}

template <class T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  T denom = x.v * x.v + y.v * y.v;
  Dual<T> r;
  r.v = atan2(y.v, x.v);  // origin check at the double level
  const std::size_t n = detail::joint_width(x.d.size(), y.d.size());
  r.d.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    r.d[i] = (x.v * detail::slot(y.d, i) - y.v * detail::slot(x.d, i)) / denom;
  return r;
}

// ---- powers ----

namespace detail {
template <class T>
T int_pow_pos(const T& x, int n) {
  T r(1.0);
  T base = x;
  for (;;) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n == 0) break;
    base = base * base;
  }
  return r;
}
}  // namespace detail

/// x^y. Small constant integer exponents (|n| <= 8) use repeated
/// multiplication so that negative bases stay legal; anything else is
/// exp(y*log x) and requires a positive base.
template <class T>
T pow(const T& x, const T& y) {
  if (is_const(y)) {
    double yv = value(y);
    double rn = std::nearbyint(yv);
    if (rn == yv && std::abs(rn) <= 8.0) {
      int n = static_cast<int>(rn);
      if (n == 0) return T(1.0);
      if (n > 0) return detail::int_pow_pos(x, n);
      if (value(x) == 0.0) throw DomainError("zero raised to a negative power");
      return T(1.0) / detail::int_pow_pos(x, -n);
    }
  }
  if (!(value(x) > 0.0))
    throw DomainError("power of non-positive base with non-integer exponent");
  return exp(y * log(x));
}

}  // namespace noether

#pragma once

// Truncated univariate Taylor arithmetic. A Jet<N> holds the normalized
// Taylor coefficients c_k = f^(k)(t0) / k! for k = 0..N, so analytic curves
// written once as templates yield exact derivatives up to order N.

#include <array>
#include <cmath>

namespace rmframe {

template <int N>
struct Jet {
  std::array<double, N + 1> c{};

  Jet() = default;
  Jet(double v) { c[0] = v; }  // NOLINT: implicit constants are the point

  static Jet variable(double t0) {
    Jet j(t0);
    if constexpr (N >= 1) j.c[1] = 1.0;
    return j;
  }

  double value() const { return c[0]; }

  /// k-th derivative at the expansion point.
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= N; ++k) c[k] += o.c[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= N; ++k) c[k] -= o.c[k];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  Jet operator-() const {
    Jet r = *this;
    r *= -1.0;
    return r;
  }
};

template <int N>
Jet<N> operator+(Jet<N> a, const Jet<N>& b) { return a += b; }
template <int N>
Jet<N> operator-(Jet<N> a, const Jet<N>& b) { return a -= b; }
template <int N>
Jet<N> operator+(Jet<N> a, double b) { a.c[0] += b; return a; }
template <int N>
Jet<N> operator+(double b, Jet<N> a) { a.c[0] += b; return a; }
template <int N>
Jet<N> operator-(Jet<N> a, double b) { a.c[0] -= b; return a; }
template <int N>
Jet<N> operator-(double b, const Jet<N>& a) { Jet<N> r = -a; r.c[0] += b; return r; }
template <int N>
Jet<N> operator*(Jet<N> a, double s) { return a *= s; }
template <int N>
Jet<N> operator*(double s, Jet<N> a) { return a *= s; }
template <int N>
Jet<N> operator/(Jet<N> a, double s) { return a *= 1.0 / s; }

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int k = 0; k <= N; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += a.c[j] * b.c[k - j];
    r.c[k] = acc;
  }
  return r;
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r;
  for (int k = 0; k <= N; ++k) {
    double acc = a.c[k];
    for (int j = 1; j <= k; ++j) acc -= b.c[j] * r.c[k - j];
    r.c[k] = acc / b.c[0];
  }
  return r;
}

template <int N>
Jet<N> operator/(double a, const Jet<N>& b) { return Jet<N>(a) / b; }

namespace detail {
// s = f(a), d = g(a) with f' = g and g' = sign * f
template <int N>
void coupled(const Jet<N>& a, double s0, double d0, double sign, Jet<N>& s, Jet<N>& d) {
  s = Jet<N>(s0);
  d = Jet<N>(d0);
  for (int k = 1; k <= N; ++k) {
    double as = 0.0, ad = 0.0;
    for (int j = 1; j <= k; ++j) {
      as += j * a.c[j] * d.c[k - j];
      ad += j * a.c[j] * s.c[k - j];
    }
    s.c[k] = as / k;
    d.c[k] = sign * ad / k;
  }
}
}  // namespace detail

template <int N>
Jet<N> sin(const Jet<N>& a) {
  Jet<N> s, c;
  detail::coupled(a, std::sin(a.c[0]), std::cos(a.c[0]), -1.0, s, c);
  return s;
}
template <int N>
Jet<N> cos(const Jet<N>& a) {
  Jet<N> s, c;
  detail::coupled(a, std::sin(a.c[0]), std::cos(a.c[0]), -1.0, s, c);
  return c;
}
template <int N>
Jet<N> sinh(const Jet<N>& a) {
  Jet<N> s, c;
  detail::coupled(a, std::sinh(a.c[0]), std::cosh(a.c[0]), 1.0, s, c);
  return s;
}
template <int N>
Jet<N> cosh(const Jet<N>& a) {
  Jet<N> s, c;
  detail::coupled(a, std::sinh(a.c[0]), std::cosh(a.c[0]), 1.0, s, c);
  return c;
}

template <int N>
Jet<N> exp(const Jet<N>& a) {
  Jet<N> e(std::exp(a.c[0]));
  for (int k = 1; k <= N; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * a.c[j] * e.c[k - j];
    e.c[k] = acc / k;
  }
  return e;
}

template <int N>
Jet<N> sqrt(const Jet<N>& a) {
  Jet<N> r(std::sqrt(a.c[0]));
  for (int k = 1; k <= N; ++k) {
    double acc = a.c[k];
    for (int j = 1; j < k; ++j) acc -= r.c[j] * r.c[k - j];
    r.c[k] = acc / (2.0 * r.c[0]);
  }
  return r;
}

template <int N>
Jet<N> log(const Jet<N>& a) {
  Jet<N> l(std::log(a.c[0]));
  for (int k = 1; k <= N; ++k) {
    double acc = 0.0;
    for (int j = 1; j < k; ++j) acc += j * l.c[j] * a.c[k - j];
    l.c[k] = (a.c[k] - acc / k) / a.c[0];
  }
  return l;
}

}  // namespace rmframe

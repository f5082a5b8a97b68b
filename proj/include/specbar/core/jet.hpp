#pragma once

// Forward-mode derivative carrier for analytic functions of one complex
// variable. A Jet holds f(z) and f'(z); the elementary functions below
// propagate both. Branch decisions are taken on the value part.

#include <cmath>
#include <complex>
#include <type_traits>

namespace specbar {

template <class C>
struct Jet {
  C v{};
  C d{};

  Jet() = default;
  Jet(C value, C deriv) : v(value), d(deriv) {}
  // implicit: constants lift to jets with zero derivative
  Jet(C value) : v(value), d(C(0)) {}  // NOLINT

  static Jet variable(C z) { return Jet(z, C(1)); }

  Jet& operator+=(const Jet& o) { v += o.v; d += o.d; return *this; }
  Jet& operator-=(const Jet& o) { v -= o.v; d -= o.d; return *this; }
  Jet& operator*=(const Jet& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Jet& operator/=(const Jet& o) {
    const C inv = C(1) / o.v;
    v *= inv;
    d = (d - v * o.d) * inv;
    return *this;
  }
};

template <class T>
struct is_jet : std::false_type {};
template <class C>
struct is_jet<Jet<C>> : std::true_type {};
template <class T>
inline constexpr bool is_jet_v = is_jet<T>::value;

template <class C> Jet<C> operator+(Jet<C> a, const Jet<C>& b) { return a += b; }
template <class C> Jet<C> operator-(Jet<C> a, const Jet<C>& b) { return a -= b; }
template <class C> Jet<C> operator*(Jet<C> a, const Jet<C>& b) { return a *= b; }
template <class C> Jet<C> operator/(Jet<C> a, const Jet<C>& b) { return a /= b; }
template <class C> Jet<C> operator-(const Jet<C>& a) { return Jet<C>(-a.v, -a.d); }

template <class C> Jet<C> operator+(Jet<C> a, const C& b) { a.v += b; return a; }
template <class C> Jet<C> operator+(const C& b, Jet<C> a) { a.v += b; return a; }
template <class C> Jet<C> operator-(Jet<C> a, const C& b) { a.v -= b; return a; }
template <class C> Jet<C> operator-(const C& b, const Jet<C>& a) { return Jet<C>(b - a.v, -a.d); }
template <class C> Jet<C> operator*(Jet<C> a, const C& b) { a.v *= b; a.d *= b; return a; }
template <class C> Jet<C> operator*(const C& b, Jet<C> a) { a.v *= b; a.d *= b; return a; }
template <class C> Jet<C> operator/(Jet<C> a, const C& b) { a.v /= b; a.d /= b; return a; }
template <class C> Jet<C> operator/(const C& b, const Jet<C>& a) {
  const C inv = C(1) / a.v;
  return Jet<C>(b * inv, -b * a.d * inv * inv);
}

// real scalars
template <class C> Jet<C> operator*(Jet<C> a, typename C::value_type b) { a.v *= b; a.d *= b; return a; }
template <class C> Jet<C> operator*(typename C::value_type b, Jet<C> a) { a.v *= b; a.d *= b; return a; }
template <class C> Jet<C> operator/(Jet<C> a, typename C::value_type b) { a.v /= b; a.d /= b; return a; }

template <class C> Jet<C> exp(const Jet<C>& a) {
  const C e = std::exp(a.v);
  return Jet<C>(e, e * a.d);
}
template <class C> Jet<C> sin(const Jet<C>& a) { return Jet<C>(std::sin(a.v), std::cos(a.v) * a.d); }
template <class C> Jet<C> cos(const Jet<C>& a) { return Jet<C>(std::cos(a.v), -std::sin(a.v) * a.d); }
template <class C> Jet<C> log(const Jet<C>& a) { return Jet<C>(std::log(a.v), a.d / a.v); }

/// Value part of a scalar (identity for plain complex numbers).
template <class R> const std::complex<R>& value_of(const std::complex<R>& z) { return z; }
template <class C> const C& value_of(const Jet<C>& z) { return z.v; }

template <class R> std::complex<R> derivative_of(const std::complex<R>&) { return {}; }
template <class C> const C& derivative_of(const Jet<C>& z) { return z.d; }

/// Underlying real type of a scalar.
template <class S> struct real_of;
template <class R> struct real_of<std::complex<R>> { using type = R; };
template <class C> struct real_of<Jet<C>> { using type = typename C::value_type; };
template <class S> using real_of_t = typename real_of<S>::type;

/// Complex type behind a scalar.
template <class S> using complex_of_t = std::complex<real_of_t<S>>;

}  // namespace specbar

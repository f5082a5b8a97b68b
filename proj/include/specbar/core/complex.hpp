#pragma once

// Branch conventions for the square root used throughout the library.
//
// The principal branch satisfies Im sqrt(z) >= 0 for every z, so its cut
// lies along the positive real semi-axis. Points on the cut take the limit
// from the upper half-plane (Im w = 0, Re w >= 0). The second sheet is the
// negation of the principal branch.

#include <cmath>
#include <complex>

#include "specbar/core/jet.hpp"

namespace specbar {

using cdouble = std::complex<double>;

enum class Sheet { principal, second };

inline const char* to_string(Sheet s) { return s == Sheet::principal ? "principal" : "second"; }

template <class R>
std::complex<R> principal_sqrt(const std::complex<R>& z) {
  std::complex<R> w = std::sqrt(z);
  if (w.imag() < R(0) || (w.imag() == R(0) && w.real() < R(0))) w = -w;
  return w;
}

template <class C>
Jet<C> principal_sqrt(const Jet<C>& z) {
  const C w = principal_sqrt(z.v);
  return Jet<C>(w, z.d / (typename C::value_type(2) * w));
}

template <class S>
S sheeted_sqrt(const S& z, Sheet sheet) {
  const S w = principal_sqrt(z);
  return sheet == Sheet::principal ? w : -w;
}

template <class R>
bool is_finite(const std::complex<R>& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace specbar

#pragma once

// Closed-form characteristic functions of the two model problems with
// Dirichlet condition at 0 and gamma = 1:
//   ex1: T_R = -d^2 + i chi_[0,R]
//   ex2: T_R = -d^2 + i chi_[0,R0] + i chi_[0,R], R >= R0
// The sheet selects the branch of sqrt(lambda) (the exterior wave number);
// the zero sets do not depend on the branch of the interior roots.

#include <complex>

#include "specbar/core/complex.hpp"
#include "specbar/core/errors.hpp"
#include "specbar/core/jet.hpp"

namespace specbar {

enum class ReferenceExample { ex1, ex2 };

template <class S>
S reference_characteristic(ReferenceExample example, const S& lambda, real_of_t<S> R, real_of_t<S> R0 = 0,
                           Sheet sheet = Sheet::principal) {
  using C = complex_of_t<S>;
  using std::cos;
  using std::sin;
  const C I(0, 1);
  const S s0 = sheeted_sqrt(lambda, sheet);
  const S s1 = principal_sqrt(lambda - I);
  if (example == ReferenceExample::ex1) return I * s0 * sin(s1 * R) - s1 * cos(s1 * R);
  if (!(R0 > 0) || R < R0) throw ArgumentError("ex2 requires R >= R0 > 0");
  const S s2 = principal_sqrt(lambda - C(0, 2));
  const S e = exp(C(0, -2) * s1 * (R - R0));
  const S r = (s1 - s0) / (s1 + s0);
  return I * s1 * (e - r) * sin(s2 * R0) - s2 * (e + r) * cos(s2 * R0);
}

}  // namespace specbar

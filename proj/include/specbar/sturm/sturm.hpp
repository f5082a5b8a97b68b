#pragma once

// Characteristic function of T_R = T_0 + i gamma chi_[0,R] on the half-line:
// the Wronskian of the interior solution satisfying the boundary condition
// at 0 and the exterior solution decaying at infinity. Its zeros are the
// eigenvalues (principal sheet) or resonances (second sheet) of T_R.

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "specbar/core/complex.hpp"
#include "specbar/core/errors.hpp"
#include "specbar/core/geometry.hpp"
#include "specbar/core/jet.hpp"
#include "specbar/core/potential.hpp"
#include "specbar/floquet/floquet.hpp"
#include "specbar/rootfinder/rootfinder.hpp"
#include "specbar/sturm/propagate.hpp"

namespace specbar {

struct CharacteristicContext {
  BarrierProblem problem;
  Sheet sheet = Sheet::principal;
  double ode_step = default_ode_step;

  CharacteristicContext() = default;
  CharacteristicContext(BarrierProblem p, Sheet s = Sheet::principal, double step = default_ode_step)
      : problem(std::move(p)), sheet(s), ode_step(step) {
    validate();
  }

  void validate() const {
    if (!(ode_step > 0) || ode_step > problem.R / 16)
      throw ArgumentError("ode_step must be positive and at most R/16");
  }
};

/// u(R), u'(R) for -u'' + (q + i gamma) u = lambda u on [0, R] with u(0) = sin eta, u'(0) = cos eta.
template <class S>
SolutionSample<S> interior_solution(const CharacteristicContext& ctx, const S& lambda) {
  using Real = real_of_t<S>;
  using C = complex_of_t<S>;
  if (!is_finite(value_of(lambda))) throw DomainError("lambda must be finite");
  const auto& p = ctx.problem;
  const C eta(p.model.eta());
  SolutionSample<S> st;
  st.value = S(std::sin(eta));
  st.derivative = S(std::cos(eta));
  Propagator<S> prop(p.model, lambda, Real(ctx.ode_step));
  prop.advance(st, Real(p.R), C(0, 1) * C(p.gamma));
  return st;
}

/// psi_+(R), psi_+'(R): the exterior solution of T_0 that decays at infinity
/// (principal sheet) or its continuation (second sheet).
template <class S>
SolutionSample<S> exterior_solution(const CharacteristicContext& ctx, const S& lambda) {
  using Real = real_of_t<S>;
  const auto lv = value_of(lambda);
  if (!is_finite(lv)) throw DomainError("lambda must be finite");
  const auto& m = ctx.problem.model;
  if (!m.has_periodic_tail() && lv.imag() == 0 && lv.real() >= 0)
    throw DomainError("lambda lies on the essential spectrum [0, inf)");
  return decaying_solution(m, Real(ctx.problem.R), lambda, ctx.sheet, Real(ctx.ode_step));
}

/// W(lambda) = u1(R) psi_+'(R) - u1'(R) psi_+(R).
template <class S>
S characteristic(const CharacteristicContext& ctx, const S& lambda) {
  const auto u = interior_solution(ctx, lambda);
  const auto psi = exterior_solution(ctx, lambda);
  return detail::unscale(u.value * psi.derivative - u.derivative * psi.value, u.log_scale + psi.log_scale);
}

/// The set S = sigma_e(T_0) u (i gamma + sigma_e(T_0)) restricted to the real range of rect.
template <class Real>
std::vector<Rectangle<Real>> singular_set(const BarrierProblem& p, const Rectangle<Real>& rect, double ode_step) {
  return essential_exclusion<Real>(p.model, std::complex<Real>(p.gamma), rect.x_lo, rect.x_hi, true, Real(ode_step));
}

/// characteristic as an AnalyticFunction with exact derivatives and the exclusion set S.
template <class Real = double>
AnalyticFunction<Real> characteristic_function(const CharacteristicContext& ctx, const Rectangle<Real>& rect) {
  using C = std::complex<Real>;
  using J = Jet<C>;
  AnalyticFunction<Real> f;
  f.value_and_derivative = [ctx](C lambda) {
    const J w = characteristic(ctx, J::variable(lambda));
    return std::pair<C, C>(w.v, w.d);
  };
  f.value = [ctx](C lambda) { return characteristic(ctx, lambda); };
  f.exclusion = singular_set<Real>(ctx.problem, rect, ctx.ode_step);
  return f;
}

/// Halves ode_step until two successive characteristic values at probe agree to rel_tol.
/// Models made of constant pieces do not use the step and are returned unchanged.
template <class Real = double>
CharacteristicContext calibrate_ode_step(CharacteristicContext ctx, std::complex<Real> probe,
                                         Real rel_tol = Real(1e-9), int max_halvings = 6) {
  const auto& m = ctx.problem.model;
  bool smooth = m.has_periodic_tail() && !is_constant(m.periodic().expr);
  for (const auto& p : m.pieces()) smooth = smooth || !is_constant(p.expr);
  if (!smooth) return ctx;
  std::complex<Real> prev = characteristic(ctx, probe);
  for (int i = 0; i < max_halvings; ++i) {
    CharacteristicContext next = ctx;
    next.ode_step /= 2;
    const std::complex<Real> cur = characteristic(next, probe);
    const bool agree = std::abs(cur - prev) <= rel_tol * std::abs(cur);
    ctx = next;
    if (agree) return ctx;
    prev = cur;
  }
  return ctx;
}

/// Eigenvalues of T_R in rect (principal sheet), away from S by opts.standoff.
template <class Real = double>
RootSet<Real> eigenvalues(const CharacteristicContext& ctx, const Rectangle<Real>& rect, const RootOptions& opts = {}) {
  if (ctx.sheet != Sheet::principal) throw ArgumentError("eigenvalues are computed on the principal sheet");
  rect.validate();
  const auto calibrated = calibrate_ode_step<Real>(ctx, rect.center());
  return find_zeros_admissible(characteristic_function<Real>(calibrated, rect), rect, opts);
}

/// Second-sheet zeros of the characteristic in a rectangle of the lower-right quadrant.
template <class Real = double>
RootSet<Real> resonances(const CharacteristicContext& ctx, const Rectangle<Real>& rect, const RootOptions& opts = {}) {
  if (ctx.sheet != Sheet::second) throw ArgumentError("resonances are computed on the second sheet");
  rect.validate();
  if (rect.x_lo < 0 || rect.y_hi > 0) throw ArgumentError("resonance rectangle must lie in the lower-right quadrant");
  const auto calibrated = calibrate_ode_step<Real>(ctx, rect.center());
  return find_zeros_admissible(characteristic_function<Real>(calibrated, rect), rect, opts);
}

/// lambda -> BC[psi_+(., lambda - i gamma)], whose zeros are the eigenvalues of T_0 + i gamma.
template <class Real = double>
AnalyticFunction<Real> limit_function(const PotentialModel& model, std::complex<Real> gamma, const Rectangle<Real>& rect,
                                      Real ode_step = Real(default_ode_step)) {
  using C = std::complex<Real>;
  using J = Jet<C>;
  const C ig = C(0, 1) * gamma;
  auto bc = [model, ig, ode_step](const auto& lambda) {
    const auto s = decaying_solution(model, Real(0), lambda - ig, Sheet::principal, ode_step);
    return detail::unscale(detail::boundary_form(model, s), s.log_scale);
  };
  AnalyticFunction<Real> f;
  f.value_and_derivative = [bc](C lambda) {
    const J w = bc(J::variable(lambda));
    return std::pair<C, C>(w.v, w.d);
  };
  f.value = [bc](C lambda) { return bc(lambda); };
  f.exclusion = essential_exclusion<Real>(model, gamma, rect.x_lo, rect.x_hi, false, ode_step);
  return f;
}

/// Eigenvalues of the limit operator T_0 + i gamma in rect.
template <class Real = double>
RootSet<Real> limit_eigenvalues(const PotentialModel& model, std::complex<Real> gamma, const Rectangle<Real>& rect,
                                const RootOptions& opts = {}, Real ode_step = Real(default_ode_step)) {
  rect.validate();
  return find_zeros_admissible(limit_function<Real>(model, gamma, rect, ode_step), rect, opts);
}

/// Lambda(R, lambda) for a q = 0 tail: the Wronskian of psi_+(., lambda) and
/// psi_-(., lambda - i gamma) at R with the plane-wave factors removed.
template <class S>
S lambda_function(const PotentialModel& model, complex_of_t<S> gamma, real_of_t<S> R, const S& lambda,
                  real_of_t<S> ode_step = real_of_t<S>(default_ode_step)) {
  using C = complex_of_t<S>;
  if (model.has_periodic_tail()) throw ArgumentError("lambda_function is implemented for q = 0 tails only");
  const C I(0, 1);
  const S z = lambda - I * gamma;
  const auto p = decaying_solution(model, R, lambda, Sheet::principal, ode_step);
  // psi_-(x, z) = exp(-i sqrt(z) x) is the second-sheet continuation of psi_+
  const auto q = decaying_solution(model, R, z, Sheet::second, ode_step);
  const S k1 = principal_sqrt(lambda), k2 = principal_sqrt(z);
  const S w = p.value * q.derivative - p.derivative * q.value;
  return w * exp(I * (k2 - k1) * R + S(C(p.log_scale + q.log_scale)));
}

}  // namespace specbar

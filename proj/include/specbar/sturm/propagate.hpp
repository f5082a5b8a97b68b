#pragma once

// Propagation of (u, u') for u'' = (q(x) + shift - lambda) u across a
// PotentialModel. Constant pieces use exact transfer matrices, other pieces
// fixed-step RK4, and whole cells of a periodic tail reuse one cell matrix.
// The scalar S is std::complex<Real> or Jet<std::complex<Real>>.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "specbar/core/complex.hpp"
#include "specbar/core/errors.hpp"
#include "specbar/core/jet.hpp"
#include "specbar/core/potential.hpp"

namespace specbar {

/// u and u' at x. The represented solution is (value, derivative) * exp(log_scale).
template <class S>
struct SolutionSample {
  using Real = real_of_t<S>;
  Real x = 0;
  S value{};
  S derivative{};
  Real log_scale = 0;
};

namespace detail {

template <class S>
using Mat2 = std::array<S, 4>;  // row major

template <class S>
real_of_t<S> magnitude(const S& s) {
  return std::abs(value_of(s));
}

template <class S>
void rescale(SolutionSample<S>& st) {
  using Real = real_of_t<S>;
  const Real n = std::max(magnitude(st.value), magnitude(st.derivative));
  if (!(n > Real(1e280) || (n < Real(1e-280) && n > 0))) return;
  st.value = st.value / n;
  st.derivative = st.derivative / n;
  st.log_scale += std::log(n);
}

/// cos(k h), sin(k h)/k and k sin(k h) as functions of k2 = k^2; entire in k2.
template <class S>
void trig_block(const S& k2, real_of_t<S> h, S& c, S& s_over_k, S& k_s) {
  using Real = real_of_t<S>;
  using std::cos;
  using std::sin;
  const S w = k2 * (h * h);
  if (std::abs(value_of(w)) < Real(0.25)) {
    // power series in w = (k h)^2
    S cs(complex_of_t<S>(1)), ss(complex_of_t<S>(1));
    S term_c(complex_of_t<S>(1)), term_s(complex_of_t<S>(1));
    for (int n = 1; n < 16; ++n) {
      term_c = term_c * (-w) / Real((2 * n - 1) * (2 * n));
      term_s = term_s * (-w) / Real((2 * n) * (2 * n + 1));
      cs += term_c;
      ss += term_s;
    }
    c = cs;
    s_over_k = ss * h;
    k_s = k2 * ss * h;
    return;
  }
  const S k = principal_sqrt(k2);
  const S kh = k * h;
  c = cos(kh);
  const S sn = sin(kh);
  s_over_k = sn / k;
  k_s = k * sn;
}

}  // namespace detail

template <class S>
class Propagator {
 public:
  using Real = real_of_t<S>;
  using C = std::complex<Real>;

  Propagator(const PotentialModel& model, S lambda, Real ode_step)
      : model_(model), lambda_(lambda), step_(ode_step) {
    if (!(ode_step > 0)) throw ArgumentError("ode_step must be positive");
  }

  const S& lambda() const { return lambda_; }

  /// Moves st from st.x to `to` (either direction), solving u'' = (q + shift - lambda) u.
  void advance(SolutionSample<S>& st, Real to, C shift = C(0)) const {
    if (to < 0) throw DomainError("propagation below x = 0");
    int guard = 0;
    while (st.x != to) {
      if (++guard > 10000000) throw IntegrationError("propagation made no progress");
      const bool fwd = to > st.x;
      const Real x = st.x;
      if (in_tail(x, fwd)) {
        const auto& t = model_.periodic();
        const Real X = Real(t.start), a = Real(t.period);
        const long n = cell_index(x, fwd);
        const Real lo = X + Real(n) * a, hi = X + Real(n + 1) * a;
        if (fwd && near(x, lo) && to >= hi + a) {
          const long cells = static_cast<long>(std::floor((to - lo) / a + tiny(to)));
          apply_cells(st, cell_matrix(shift), cells);
          st.x = lo + Real(cells) * a;
          continue;
        }
        const Real end = fwd ? std::min(hi, to) : std::max(lo, to);
        segment(st, end, t.expr, Real(n) * a, shift);
        continue;
      }
      Real end = to;
      Expression expr = Constant{};
      bool found = false;
      for (const auto& p : model_.pieces()) {
        const Real lo = Real(p.x_lo), hi = Real(p.x_hi);
        if (fwd ? (x >= lo && x < hi) : (x > lo && x <= hi)) {
          end = fwd ? std::min(hi, to) : std::max(lo, to);
          expr = p.expr;
          found = true;
          break;
        }
      }
      if (!found) {
        // gap with q = 0 between the last piece and X (or beyond all pieces)
        if (fwd && model_.has_periodic_tail()) end = std::min(to, Real(model_.periodic().start));
        if (!fwd) end = std::max(to, Real(model_.support_end()));
      }
      if (fwd && model_.has_periodic_tail()) end = std::min(end, Real(model_.periodic().start));
      segment(st, end, expr, Real(0), shift);
    }
  }

  /// Transfer matrix over one tail cell [X, X + a] (rows map (u, u') at X to X + a).
  detail::Mat2<S> cell_matrix(C shift) const {
    for (const auto& [s, m] : cells_)
      if (s == shift) return m;
    const auto& t = model_.periodic();
    const Real X = Real(t.start), a = Real(t.period);
    detail::Mat2<S> m;
    for (int col = 0; col < 2; ++col) {
      SolutionSample<S> st;
      st.x = X;
      st.value = S(C(col == 0 ? 1 : 0));
      st.derivative = S(C(col == 0 ? 0 : 1));
      segment(st, X + a, t.expr, Real(0), shift);
      const Real f = std::exp(st.log_scale);
      m[col] = st.value * f;
      m[2 + col] = st.derivative * f;
    }
    cells_.push_back({shift, m});
    return m;
  }

 private:
  static Real tiny(Real x) { return Real(64) * std::numeric_limits<Real>::epsilon() * std::max(Real(1), std::abs(x)); }
  static bool near(Real a, Real b) { return std::abs(a - b) <= tiny(std::max(std::abs(a), std::abs(b))); }

  bool in_tail(Real x, bool fwd) const {
    if (!model_.has_periodic_tail()) return false;
    const Real X = Real(model_.periodic().start);
    return fwd ? x >= X : x > X;
  }

  // index n of the cell [X + n a, X + (n + 1) a] that the step starting at x enters
  long cell_index(Real x, bool fwd) const {
    const auto& t = model_.periodic();
    const Real X = Real(t.start), a = Real(t.period);
    long n = static_cast<long>(std::floor((x - X) / a));
    if (fwd) {
      while (X + Real(n + 1) * a <= x + tiny(x)) ++n;
      while (n > 0 && X + Real(n) * a > x + tiny(x)) --n;
    } else {
      while (X + Real(n) * a >= x - tiny(x) && n > 0) --n;
      while (X + Real(n + 1) * a < x - tiny(x)) ++n;
    }
    return std::max(n, 0L);
  }

  void apply_cells(SolutionSample<S>& st, const detail::Mat2<S>& m, long cells) const {
    for (long c = 0; c < cells; ++c) {
      const S u = m[0] * st.value + m[1] * st.derivative;
      const S v = m[2] * st.value + m[3] * st.derivative;
      st.value = u;
      st.derivative = v;
      detail::rescale(st);
    }
  }

  // one smooth stretch [st.x, end]; q(x) = expr evaluated at x - offset
  void segment(SolutionSample<S>& st, Real end, const Expression& expr, Real offset, C shift) const {
    const Real d = end - st.x;
    if (d == 0) return;
    if (const auto* c = std::get_if<Constant>(&expr)) {
      constant_segment(st, d, C(c->value) + shift);
    } else {
      rk4_segment(st, end, expr, offset, shift);
    }
    st.x = end;
  }

  void constant_segment(SolutionSample<S>& st, Real d, C level) const {
    const S k2 = lambda_ - level;
    const C kv = principal_sqrt(value_of(k2));
    // keep the growth of each chunk below e^20
    const long chunks = std::max(1L, static_cast<long>(std::ceil(std::abs(kv.imag()) * std::abs(d) / Real(20))));
    const Real h = d / Real(chunks);
    S c, s_over_k, k_s;
    detail::trig_block(k2, h, c, s_over_k, k_s);
    for (long j = 0; j < chunks; ++j) {
      const S u = c * st.value + s_over_k * st.derivative;
      const S v = c * st.derivative - k_s * st.value;
      st.value = u;
      st.derivative = v;
      detail::rescale(st);
    }
  }

  void rk4_segment(SolutionSample<S>& st, Real end, const Expression& expr, Real offset, C shift) const {
    const Real x0 = st.x;
    const Real d = end - x0;
    const long steps = std::max(1L, static_cast<long>(std::ceil(std::abs(d) / step_)));
    const Real h = d / Real(steps);
    auto coef = [&](Real x) { return S(evaluate<Real>(expr, x - offset) + shift) - lambda_; };
    S u = st.value, v = st.derivative;
    S c_prev = coef(x0);
    for (long j = 0; j < steps; ++j) {
      const Real x = x0 + Real(j) * h;
      const S c_mid = coef(x + h / 2);
      const S c_next = coef(j + 1 == steps ? end : x0 + Real(j + 1) * h);
      const S k1u = v, k1v = c_prev * u;
      const S k2u = v + k1v * (h / 2), k2v = c_mid * (u + k1u * (h / 2));
      const S k3u = v + k2v * (h / 2), k3v = c_mid * (u + k2u * (h / 2));
      const S k4u = v + k3v * h, k4v = c_next * (u + k3u * h);
      u = u + (k1u + Real(2) * k2u + Real(2) * k3u + k4u) * (h / 6);
      v = v + (k1v + Real(2) * k2v + Real(2) * k3v + k4v) * (h / 6);
      c_prev = c_next;
      if ((j & 31) == 31) {
        st.value = u;
        st.derivative = v;
        detail::rescale(st);
        u = st.value;
        v = st.derivative;
      }
    }
    st.value = u;
    st.derivative = v;
    detail::rescale(st);
  }

  const PotentialModel& model_;
  S lambda_;
  Real step_;
  mutable std::vector<std::pair<C, detail::Mat2<S>>> cells_;
};

}  // namespace specbar

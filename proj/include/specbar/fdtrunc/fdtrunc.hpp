#pragma once

// Second-order finite differences for T_R truncated to [0, X] with Dirichlet
// conditions at both ends, the full spectrum of the resulting tridiagonal
// matrix, and its classification against the bands of the periodic tail.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "specbar/core/complex.hpp"
#include "specbar/core/errors.hpp"
#include "specbar/core/potential.hpp"
#include "specbar/floquet/floquet.hpp"

namespace specbar {

struct TridiagonalOperator {
  std::size_t n = 0;
  std::vector<cdouble> sub, diag, super;
  double h = 0.0;
  double X = 0.0;

  /// max row sum of moduli
  double norm_inf() const {
    double best = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = std::abs(diag[i]);
      if (i > 0) s += std::abs(sub[i - 1]);
      if (i + 1 < n) s += std::abs(super[i]);
      best = std::max(best, s);
    }
    return best;
  }
};

struct ClassifiedSpectrum {
  std::vector<cdouble> pollution_real;
  std::vector<cdouble> essential_approx;
  std::vector<cdouble> discrete_candidates;
};

/// diag_j = 2/h^2 + q(jh) + i gamma chi_[0,R](jh), off-diagonals -1/h^2, j = 1..n, n = round(X/h) - 1.
inline TridiagonalOperator build_matrix(const BarrierProblem& p, double X, double h, bool with_barrier = true) {
  if (!(h > 0) || h > X / 16) throw ArgumentError("grid step must satisfy 0 < h <= X/16");
  if (with_barrier && !(X > p.R)) throw ArgumentError("truncation point X must exceed the barrier length R");
  const long n = std::lround(X / h) - 1;
  if (n < 2) throw ArgumentError("grid must have at least two interior points");
  TridiagonalOperator t;
  t.n = static_cast<std::size_t>(n);
  t.h = h;
  t.X = X;
  const double off = -1.0 / (h * h);
  t.sub.assign(t.n - 1, off);
  t.super.assign(t.n - 1, off);
  t.diag.resize(t.n);
  const cdouble ig = cdouble(0, 1) * p.gamma;
  for (std::size_t j = 1; j <= t.n; ++j) {
    const double x = double(j) * h;
    cdouble d = 2.0 / (h * h) + eval_potential(p.model, x);
    if (with_barrier && x <= p.R) d += ig;
    t.diag[j - 1] = d;
  }
  return t;
}

namespace detail {

// implicit QL for a complex symmetric tridiagonal matrix (diagonal d,
// off-diagonal e[i] coupling i and i + 1), using complex orthogonal rotations
inline void complex_symmetric_ql(std::vector<cdouble>& d, std::vector<cdouble> e) {
  const std::size_t n = d.size();
  e.push_back(0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  std::mt19937 rng(12345u);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 60) throw SolverError("QL iteration did not converge", static_cast<long>(l));
      cdouble g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      cdouble r = std::sqrt(g * g + 1.0);
      g = d[m] - d[l] + e[l] / (std::abs(g + r) >= std::abs(g - r) ? g + r : g - r);
      if (iter % 10 == 0) g *= 1.0 + 0.1 * cdouble(jitter(rng), jitter(rng));  // exceptional shift
      cdouble s = 1.0, c = 1.0, p = 0.0;
      bool early = false;
      for (std::size_t i = m; i-- > l;) {
        const cdouble f = s * e[i];
        const cdouble b = c * e[i];
        r = std::sqrt(f * f + g * g);
        e[i + 1] = r;
        if (std::abs(r) <= eps * eps * (std::abs(f) + std::abs(g))) {
          if (std::abs(f) + std::abs(g) == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            early = true;
            break;
          }
          // isotropic rotation (c^2 + s^2 = 1 has no finite solution)
          throw SolverError("rotation breakdown in complex symmetric QL", static_cast<long>(i));
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (early) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

inline bool lex_less(cdouble a, cdouble b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

}  // namespace detail

/// All n eigenvalues, sorted by (Re, Im).
inline std::vector<cdouble> eigenvalues_dense(const TridiagonalOperator& t, std::size_t cap = 6000) {
  if (t.n > cap) throw ArgumentError("matrix size " + std::to_string(t.n) + " exceeds the cap " + std::to_string(cap));
  std::vector<cdouble> d = t.diag;
  std::vector<cdouble> e(t.n > 0 ? t.n - 1 : 0);
  // diagonal similarity makes a general tridiagonal matrix symmetric
  for (std::size_t i = 0; i + 1 < t.n; ++i) e[i] = std::sqrt(t.sub[i] * t.super[i]);
  detail::complex_symmetric_ql(d, e);
  std::sort(d.begin(), d.end(), detail::lex_less);
  return d;
}

/// ||(T - lambda) v|| / ||T|| for v from two steps of inverse iteration.
inline double residual_check(const TridiagonalOperator& t, cdouble lambda) {
  const std::size_t n = t.n;
  const double scale = t.norm_inf();
  const double tiny = std::numeric_limits<double>::epsilon() * scale;
  // LU with partial pivoting; interchanges create a second superdiagonal du2
  std::vector<cdouble> dl = t.sub, du = t.super, d(n), du2(n, 0.0);
  std::vector<char> swapped(n, 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - lambda;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(dl[i])) {
      if (d[i] == 0.0) d[i] = tiny;
      const cdouble fact = dl[i] / d[i];
      dl[i] = fact;
      d[i + 1] -= fact * du[i];
    } else {
      const cdouble fact = d[i] / dl[i];
      d[i] = dl[i];
      dl[i] = fact;
      const cdouble temp = du[i];
      du[i] = d[i + 1];
      d[i + 1] = temp - fact * d[i + 1];
      if (i + 2 < n) {
        du2[i] = du[i + 1];
        du[i + 1] = -fact * du[i + 1];
      }
      swapped[i] = 1;
    }
  }
  if (d[n - 1] == 0.0) d[n - 1] = tiny;
  auto solve = [&](std::vector<cdouble> x) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        x[i + 1] -= dl[i] * x[i];
      } else {
        const cdouble temp = x[i];
        x[i] = x[i + 1];
        x[i + 1] = temp - dl[i] * x[i];
      }
    }
    for (std::size_t i = n; i-- > 0;) {
      cdouble s = x[i];
      if (i + 1 < n) s -= du[i] * x[i + 1];
      if (i + 2 < n) s -= du2[i] * x[i + 2];
      x[i] = s / d[i];
    }
    double nrm = 0;
    for (const auto& v : x) nrm += std::norm(v);
    nrm = std::sqrt(nrm);
    for (auto& v : x) v /= nrm;
    return x;
  };
  std::vector<cdouble> v(n);
  std::mt19937 rng(7u);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto& x : v) x = cdouble(u(rng), u(rng));
  v = solve(solve(v));
  double res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    cdouble s = (t.diag[i] - lambda) * v[i];
    if (i > 0) s += t.sub[i - 1] * v[i - 1];
    if (i + 1 < n) s += t.super[i] * v[i + 1];
    res += std::norm(s);
  }
  return std::sqrt(res) / scale;
}

/// Splits eigenvalues into pollution near the real bands, approximations of
/// i gamma + bands, and the rest.
inline ClassifiedSpectrum classify_spectrum(const std::vector<cdouble>& eigs,
                                            const std::vector<std::pair<double, double>>& bands, double gamma,
                                            double tol_band = 5e-3) {
  if (!(tol_band > 0)) throw ArgumentError("tol_band must be positive");
  auto near_band = [&](double x) {
    for (const auto& [l, r] : bands)
      if (x > l - tol_band && x < r + tol_band) return true;
    return false;
  };
  ClassifiedSpectrum out;
  for (const auto& z : eigs) {
    if (std::abs(z.imag()) < tol_band && near_band(z.real())) out.pollution_real.push_back(z);
    else if (std::abs(z.imag() - gamma) < tol_band && near_band(z.real())) out.essential_approx.push_back(z);
    else out.discrete_candidates.push_back(z);
  }
  return out;
}

inline ClassifiedSpectrum classify_spectrum(const std::vector<cdouble>& eigs, const BandStructure<double>& bands,
                                            double gamma, double tol_band = 5e-3) {
  return classify_spectrum(eigs, bands.bands, gamma, tol_band);
}

}  // namespace specbar

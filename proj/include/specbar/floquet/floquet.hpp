#pragma once

// Floquet analysis of the periodic tail q(x + a) = q(x), x >= X: monodromy,
// discriminant, multipliers, exponent, bands, Floquet solutions, and the
// zero sets used for S_p and embedded resonances.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "specbar/core/complex.hpp"
#include "specbar/core/errors.hpp"
#include "specbar/core/jet.hpp"
#include "specbar/core/parallel.hpp"
#include "specbar/core/potential.hpp"
#include "specbar/rootfinder/rootfinder.hpp"
#include "specbar/sturm/propagate.hpp"

namespace specbar {

enum class FloquetSign { plus, minus };

/// phi1, phi2 are the canonical solutions at X (phi1 = 1, phi1' = 0;
/// phi2 = 0, phi2' = 1), evaluated at X + a.
template <class S>
struct Monodromy {
  S phi1_end{}, phi1p_end{}, phi2_end{}, phi2p_end{};
  S z{};

  S determinant() const { return phi1_end * phi2p_end - phi1p_end * phi2_end; }
  S discriminant() const { return phi1_end + phi2p_end; }
};

template <class S>
struct FloquetData {
  S D{};
  S rho_plus{}, rho_minus{};
  S k{};
  Sheet sheet = Sheet::principal;
};

template <class Real = double>
struct BandStructure {
  std::vector<std::pair<Real, Real>> bands;
  std::vector<Real> band_ends;
  /// the first band starts (last band ends) at the edge of the scanned range
  bool clipped_left = false, clipped_right = false;
};

inline constexpr double default_ode_step = 1e-3;

namespace detail {

inline void require_periodic(const PotentialModel& m) {
  if (!m.has_periodic_tail()) throw ArgumentError("model has no periodic tail");
}

template <class S>
Monodromy<S> monodromy_from(const Propagator<S>& prop) {
  using C = complex_of_t<S>;
  const auto m = prop.cell_matrix(C(0));
  Monodromy<S> out{m[0], m[2], m[1], m[3], prop.lambda()};
  const auto size = std::abs(value_of(out.phi1_end * out.phi2p_end)) + std::abs(value_of(out.phi1p_end * out.phi2_end));
  if (std::abs(value_of(out.determinant()) - C(1)) > real_of_t<S>(1e-8) * std::max(real_of_t<S>(1), size))
    throw IntegrationError("monodromy determinant drifted from 1; reduce ode_step");
  return out;
}

template <class Real>
std::complex<Real> discriminant_slope(const PotentialModel& m, std::complex<Real> z, Real ode_step) {
  using C = std::complex<Real>;
  Propagator<Jet<C>> prop(m, Jet<C>::variable(z), ode_step);
  return monodromy_from(prop).discriminant().d;
}

template <class S>
FloquetData<S> floquet_from(const PotentialModel& m, const Monodromy<S>& mon, Sheet sheet,
                            real_of_t<S> ode_step) {
  using Real = real_of_t<S>;
  using C = complex_of_t<S>;
  const S D = mon.discriminant();
  const C Dv = value_of(D);
  if (std::min(std::abs(Dv - C(2)), std::abs(Dv + C(2))) < Real(1e-12))
    throw BranchPointError("discriminant is +-2: z is a band end");
  S w = principal_sqrt(S(C(4)) - D * D);
  const C I(0, 1);
  const S r_a = (D + I * w) / Real(2);
  const Real mod = std::abs(value_of(r_a));
  if (std::abs(mod - Real(1)) < Real(1e-10)) {
    // on a band: take the limit from the half-plane containing z (upper when real);
    // |rho_+| < 1 there requires sign(w) = -sign(D') above the axis
    C dD;
    if constexpr (is_jet_v<S>) {
      if (derivative_of(mon.z) != C(0)) dD = D.d / derivative_of(mon.z);
      else dD = discriminant_slope(m, value_of(mon.z), ode_step);
    } else {
      dD = discriminant_slope(m, mon.z, ode_step);
    }
    const Real s = (value_of(w) * dD).real();
    const bool above = value_of(mon.z).imag() >= 0;
    if ((above && s > 0) || (!above && s < 0)) w = -w;
  } else if (mod > Real(1)) {
    w = -w;
  }
  // the small multiplier is formed as the reciprocal to avoid cancellation
  const S big = (D - I * w) / Real(2);
  S rho_p = S(C(1)) / big;
  S rho_m = big;
  if (sheet == Sheet::second) std::swap(rho_p, rho_m);
  FloquetData<S> fd;
  fd.D = D;
  fd.rho_plus = rho_p;
  fd.rho_minus = rho_m;
  const Real a = Real(m.periodic().period);
  fd.k = -I * log(rho_p) / a;
  fd.sheet = sheet;
  return fd;
}

}  // namespace detail

/// Canonical solutions over one tail period at spectral parameter z.
template <class S>
Monodromy<S> monodromy(const PotentialModel& m, const S& z, real_of_t<S> ode_step = default_ode_step) {
  detail::require_periodic(m);
  Propagator<S> prop(m, z, ode_step);
  return detail::monodromy_from(prop);
}

/// Discriminant, multipliers and Floquet exponent at z. On the principal
/// sheet |rho_+| < 1 off the bands; on a band rho_+ is the limit from the
/// upper half-plane. The second sheet exchanges rho_+ and rho_-.
template <class S>
FloquetData<S> floquet_data(const PotentialModel& m, const S& z, Sheet sheet = Sheet::principal,
                            real_of_t<S> ode_step = default_ode_step) {
  return detail::floquet_from(m, monodromy(m, z, ode_step), sheet, ode_step);
}

/// psi_+ (sign plus) or psi_- at x: the monodromy eigenvector on [X, X + a],
/// the multiplier law beyond, and backward integration below X.
template <class S>
SolutionSample<S> floquet_solution(const PotentialModel& m, real_of_t<S> x, const S& z, FloquetSign sign,
                                   Sheet sheet = Sheet::principal, real_of_t<S> ode_step = default_ode_step) {
  using Real = real_of_t<S>;
  using C = complex_of_t<S>;
  detail::require_periodic(m);
  if (x < 0) throw DomainError("Floquet solution requested at x < 0");
  Propagator<S> prop(m, z, ode_step);
  const auto mon = detail::monodromy_from(prop);
  const auto fd = detail::floquet_from(m, mon, sheet, ode_step);
  const S rho = sign == FloquetSign::plus ? fd.rho_plus : fd.rho_minus;
  const Real X = Real(m.periodic().start), a = Real(m.periodic().period);

  SolutionSample<S> st;
  st.x = X;
  st.value = -mon.phi2_end;
  st.derivative = mon.phi1_end - rho;
  if (x < X) {
    prop.advance(st, x);
    return st;
  }
  long n = static_cast<long>(std::floor((x - X) / a));
  Real reduced = x - Real(n) * a;
  if (reduced >= X + a) {
    ++n;
    reduced -= a;
  }
  prop.advance(st, std::max(reduced, X));
  if (n > 0) {
    const Real log_mod = std::log(std::abs(value_of(rho)));
    const S factor = exp(S(C(Real(n))) * log(rho) - S(C(Real(n) * log_mod)));
    st.value = st.value * factor;
    st.derivative = st.derivative * factor;
    st.log_scale += Real(n) * log_mod;
  }
  st.x = x;
  return st;
}

/// The solution of the unperturbed problem that decays at infinity for z off
/// the essential spectrum (on the chosen sheet), evaluated at x.
template <class S>
SolutionSample<S> decaying_solution(const PotentialModel& m, real_of_t<S> x, const S& z, Sheet sheet,
                                    real_of_t<S> ode_step = default_ode_step) {
  using Real = real_of_t<S>;
  using C = complex_of_t<S>;
  if (m.has_periodic_tail()) return floquet_solution(m, x, z, FloquetSign::plus, sheet, ode_step);
  const S k = sheeted_sqrt(z, sheet);
  const Real start = std::max(x, Real(m.support_end()));
  const C ik_v = C(0, 1) * value_of(k);
  SolutionSample<S> st;
  st.x = start;
  st.log_scale = (ik_v * start).real();
  st.value = exp(C(0, 1) * k * start - S(C(st.log_scale)));
  st.derivative = C(0, 1) * k * st.value;
  if (start > x) Propagator<S>(m, z, ode_step).advance(st, x);
  return st;
}

namespace detail {

template <class S>
S boundary_form(const PotentialModel& m, const SolutionSample<S>& s) {
  using C = complex_of_t<S>;
  const C eta(m.eta());
  return std::cos(eta) * s.value - std::sin(eta) * s.derivative;
}

template <class S>
S unscale(S v, real_of_t<S> log_scale) {
  if (log_scale == 0) return v;
  const real_of_t<S> f = std::exp(log_scale);
  if (!std::isfinite(f) || f == 0) throw DomainError("solution magnitude exceeds the floating-point range");
  return v * f;
}

template <class Real>
Real band_gap_function(const PotentialModel& m, Real z, Real ode_step) {
  using C = std::complex<Real>;
  return std::abs(monodromy(m, C(z), ode_step).discriminant().real()) - Real(2);
}

}  // namespace detail

/// Intervals of [z_min, z_max] where |D| <= 2, ends bisected to tol.
template <class Real = double>
BandStructure<Real> bands(const PotentialModel& m, Real z_min, Real z_max, Real tol = Real(1e-10),
                          int grid = 2000, Real ode_step = Real(default_ode_step)) {
  detail::require_periodic(m);
  if (!(z_min < z_max)) throw ArgumentError("bands requires z_min < z_max");
  if (grid < 8) throw ArgumentError("band scan grid must have at least 8 points");
  auto g = [&](Real z) { return detail::band_gap_function(m, z, ode_step); };

  std::vector<Real> zs(grid), fs(grid);
  for (int i = 0; i < grid; ++i) zs[i] = z_min + (z_max - z_min) * Real(i) / Real(grid - 1);
  parallel_for(grid, [&](std::size_t i) { fs[i] = g(zs[i]); });

  // a band or gap narrower than a grid cell shows up as a local extremum
  // whose parabolic fit crosses zero; rescan such stretches more finely
  for (int retry = 0;; ++retry) {
    std::vector<std::pair<Real, Real>> suspicious;
    for (std::size_t i = 1; i + 1 < zs.size(); ++i) {
      const Real f0 = fs[i - 1], f1 = fs[i], f2 = fs[i + 1];
      const bool same_sign = (f0 > 0) == (f1 > 0) && (f1 > 0) == (f2 > 0);
      if (!same_sign) continue;
      const bool pos_min = f1 > 0 && f1 <= f0 && f1 <= f2;
      const bool neg_max = f1 <= 0 && f1 >= f0 && f1 >= f2;
      if (!pos_min && !neg_max) continue;
      const Real h = zs[i + 1] - zs[i];
      const Real curv = (f0 - Real(2) * f1 + f2) / (h * h);
      const Real slope = (f2 - f0) / (Real(2) * h);
      if (curv == 0) continue;
      const Real vertex = f1 - slope * slope / (Real(2) * curv);
      const Real margin = Real(1e-6);
      if ((pos_min && vertex < -margin) || (neg_max && vertex > margin)) suspicious.push_back({zs[i - 1], zs[i + 1]});
    }
    if (suspicious.empty()) break;
    if (retry >= 3) throw IntegrationError("band scan could not resolve a band or gap narrower than the grid");
    for (const auto& [lo, hi] : suspicious) {
      constexpr int fine = 64;
      std::vector<Real> zf(fine - 1), ff(fine - 1);
      for (int j = 1; j < fine; ++j) zf[j - 1] = lo + (hi - lo) * Real(j) / Real(fine);
      parallel_for(zf.size(), [&](std::size_t j) { ff[j] = g(zf[j]); });
      zs.insert(zs.end(), zf.begin(), zf.end());
      fs.insert(fs.end(), ff.begin(), ff.end());
    }
    std::vector<std::size_t> order(zs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return zs[a] < zs[b]; });
    std::vector<Real> z2, f2;
    for (auto i : order) {
      if (!z2.empty() && zs[i] == z2.back()) continue;
      z2.push_back(zs[i]);
      f2.push_back(fs[i]);
    }
    zs = std::move(z2);
    fs = std::move(f2);
  }

  // bisect every sign change of |D| - 2
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i + 1 < zs.size(); ++i)
    if ((fs[i] <= 0) != (fs[i + 1] <= 0)) cells.push_back(i);
  std::vector<Real> ends(cells.size());
  parallel_for(cells.size(), [&](std::size_t c) {
    Real lo = zs[cells[c]], hi = zs[cells[c] + 1];
    const bool lo_inside = fs[cells[c]] <= 0;
    while (hi - lo > tol) {
      const Real mid = (lo + hi) / 2;
      if ((g(mid) <= 0) == lo_inside) lo = mid;
      else hi = mid;
    }
    ends[c] = (lo + hi) / 2;
  });

  BandStructure<Real> out;
  bool inside = fs.front() <= 0;
  out.clipped_left = inside;
  Real start = z_min;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (inside) out.bands.push_back({start, ends[c]});
    else start = ends[c];
    inside = !inside;
  }
  if (inside) {
    out.bands.push_back({start, z_max});
    out.clipped_right = true;
  }
  for (const auto& [l, r] : out.bands) {
    out.band_ends.push_back(l);
    out.band_ends.push_back(r);
  }
  return out;
}

/// Zeros over rect of psi_+(x0, l) psi_-'(x0, l - i gamma) - psi_+'(x0, l) psi_-(x0, l - i gamma).
/// For a q = 0 tail psi_+- = exp(+-i sqrt(z) x).
template <class Real = double>
RootSet<Real> sp_zeros(const PotentialModel& m, std::complex<Real> gamma, Real x0, const Rectangle<Real>& rect,
                       const RootOptions& opts = {}, Real ode_step = Real(default_ode_step));

/// The combination whose zeros sp_zeros reports, as an analytic function.
template <class Real = double>
AnalyticFunction<Real> sp_function(const PotentialModel& m, std::complex<Real> gamma, Real x0,
                                   Real ode_step = Real(default_ode_step)) {
  using C = std::complex<Real>;
  using J = Jet<C>;
  if (m.has_periodic_tail()) {
    const Real X = Real(m.periodic().start), a = Real(m.periodic().period);
    if (x0 < X || x0 >= X + a) throw ArgumentError("x0 must lie in [X, X + a)");
  } else if (x0 < Real(m.support_end())) {
    throw ArgumentError("x0 must lie beyond the compact part of the potential");
  }
  AnalyticFunction<Real> f;
  const C ig = C(0, 1) * gamma;
  f.value_and_derivative = [m, ig, x0, ode_step](C lambda) {
    const J l = J::variable(lambda);
    SolutionSample<J> p, q;
    if (m.has_periodic_tail()) {
      p = floquet_solution(m, x0, l, FloquetSign::plus, Sheet::principal, ode_step);
      q = floquet_solution(m, x0, l - ig, FloquetSign::minus, Sheet::principal, ode_step);
    } else {
      const J k1 = principal_sqrt(l), k2 = principal_sqrt(l - ig);
      p.value = exp(C(0, 1) * k1 * x0);
      p.derivative = C(0, 1) * k1 * p.value;
      q.value = exp(C(0, -1) * k2 * x0);
      q.derivative = C(0, -1) * k2 * q.value;
    }
    const J w = detail::unscale(p.value * q.derivative - p.derivative * q.value, p.log_scale + q.log_scale);
    return std::pair<C, C>(w.v, w.d);
  };
  return f;
}

/// Real points mu of the band interval where BC[phi_u(., mu)] vanishes to tol;
/// phi_u is the decaying solution continued from the upper half-plane.
template <class Real = double>
std::vector<Real> embedded_resonances(const PotentialModel& m, std::pair<Real, Real> band, Real tol,
                                      int grid = 2000, Real ode_step = Real(default_ode_step)) {
  using C = std::complex<Real>;
  const auto [lo, hi] = band;
  if (!(lo < hi)) throw ArgumentError("band interval must satisfy lo < hi");
  if (!m.has_periodic_tail() && !(lo > 0)) throw ArgumentError("band interval must exclude the band end 0");
  auto bc = [&](Real z) {
    const auto s = decaying_solution(m, Real(0), C(z), Sheet::principal, ode_step);
    return std::abs(detail::unscale(detail::boundary_form(m, s), s.log_scale));
  };
  std::vector<Real> zs(grid), gs(grid);
  for (int i = 0; i < grid; ++i) zs[i] = lo + (hi - lo) * Real(i) / Real(grid - 1);
  if (m.has_periodic_tail()) {
    std::vector<Real> ds(grid);
    parallel_for(grid, [&](std::size_t i) { ds[i] = detail::band_gap_function(m, zs[i], ode_step); });
    if (*std::max_element(ds.begin(), ds.end()) >= 0)
      throw ArgumentError("interval is not inside the interior of a band");
  }
  parallel_for(grid, [&](std::size_t i) { gs[i] = bc(zs[i]); });
  std::vector<Real> out;
  for (int i = 1; i + 1 < grid; ++i) {
    if (!(gs[i] <= gs[i - 1] && gs[i] < gs[i + 1])) continue;
    // golden-section search for the minimum of |BC| in the bracketing cells
    const Real phi = (std::sqrt(Real(5)) - 1) / 2;
    Real a = zs[i - 1], b = zs[i + 1];
    Real c = b - phi * (b - a), d = a + phi * (b - a);
    Real fc = bc(c), fd = bc(d);
    while (b - a > Real(64) * std::numeric_limits<Real>::epsilon() * std::max(Real(1), std::abs(b))) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - phi * (b - a);
        fc = bc(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + phi * (b - a);
        fd = bc(d);
      }
    }
    const Real mu = (a + b) / 2;
    if (bc(mu) < tol) out.push_back(mu);
  }
  return out;
}

/// Rectangles covering sigma_e(T_0) and i gamma + sigma_e(T_0) over the real range [x_lo, x_hi].
template <class Real = double>
std::vector<Rectangle<Real>> essential_exclusion(const PotentialModel& m, std::complex<Real> gamma, Real x_lo,
                                                 Real x_hi, bool include_unshifted = true,
                                                 Real ode_step = Real(default_ode_step)) {
  const Real far = Real(1e300);
  std::vector<std::pair<Real, Real>> sigma;
  if (!m.has_periodic_tail()) {
    sigma.push_back({Real(0), far});
  } else {
    const Real pad = Real(1) + Real(0.05) * (x_hi - x_lo);
    const Real lo = std::min(x_lo, x_lo - std::abs(gamma.imag())) - pad;
    const Real hi = std::max(x_hi, x_hi + std::abs(gamma.imag())) + pad;
    const auto b = bands<Real>(m, lo, hi, Real(1e-10), 2000, ode_step);
    for (std::size_t i = 0; i < b.bands.size(); ++i) {
      auto iv = b.bands[i];
      if (i == 0 && b.clipped_left) iv.first = -far;
      if (i + 1 == b.bands.size() && b.clipped_right) iv.second = far;
      sigma.push_back(iv);
    }
  }
  std::vector<Rectangle<Real>> out;
  const std::complex<Real> shift = std::complex<Real>(0, 1) * gamma;
  for (const auto& [l, r] : sigma) {
    if (include_unshifted) out.push_back({l, r, Real(0), Real(0)});
    out.push_back({l + shift.real(), r + shift.real(), shift.imag(), shift.imag()});
  }
  return out;
}

template <class Real>
RootSet<Real> sp_zeros(const PotentialModel& m, std::complex<Real> gamma, Real x0, const Rectangle<Real>& rect,
                       const RootOptions& opts, Real ode_step) {
  auto f = sp_function<Real>(m, gamma, x0, ode_step);
  f.exclusion = essential_exclusion<Real>(m, gamma, rect.x_lo, rect.x_hi, true, ode_step);
  return find_zeros_admissible(f, rect, opts);
}

}  // namespace specbar

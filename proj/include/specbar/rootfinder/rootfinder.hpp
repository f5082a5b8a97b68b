#pragma once

// Zeros of an analytic function inside a rectangle by the argument
// principle: the contour integral of f'/f around a rectangle counts the
// enclosed zeros, rectangles holding several zeros are bisected, and
// isolated zeros are polished with damped Newton iteration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "specbar/core/complex.hpp"
#include "specbar/core/errors.hpp"
#include "specbar/core/geometry.hpp"

namespace specbar {

template <class Real = double>
struct AnalyticFunction {
  using C = std::complex<Real>;

  std::function<C(C)> value;
  /// optional; central differences are used when neither derivative hook is set
  std::function<C(C)> derivative;
  /// optional and preferred when present: returns (f(z), f'(z))
  std::function<std::pair<C, C>(C)> value_and_derivative;
  /// closed regions where f is not analytic (or not defined)
  std::vector<Rectangle<Real>> exclusion;

  std::pair<C, C> evaluate(C z) const;
};

template <class Real = double>
struct Root {
  std::complex<Real> location;
  int multiplicity = 1;
  Real residual = 0;
};

template <class Real = double>
struct RootSet {
  std::vector<Root<Real>> roots;
  int total_count = 0;

  bool empty() const { return roots.empty(); }
  std::size_t size() const { return roots.size(); }
};

struct RootOptions {
  double quad_tol = 1e-10;
  double refine_tol = 1e-12;
  int max_depth = 40;
  /// distance kept from exclusion regions by find_zeros_admissible
  double standoff = 1e-3;
  int max_retries = 5;
  unsigned seed = 20240229u;
};

namespace detail {

template <class Real>
std::complex<Real> central_difference(const std::function<std::complex<Real>(std::complex<Real>)>& f,
                                      std::complex<Real> z) {
  // fourth-order stencil; the step is halved while the Richardson error estimate improves
  using C = std::complex<Real>;
  const Real eps = std::numeric_limits<Real>::epsilon();
  const Real scale = std::max(Real(1), std::abs(z));
  Real h = std::pow(eps, Real(0.2)) * scale * Real(8);
  auto stencil = [&](Real step) {
    const C hs(step, 0);
    return (Real(8) * (f(z + hs) - f(z - hs)) - (f(z + Real(2) * hs) - f(z - Real(2) * hs))) / (Real(12) * step);
  };
  C best = stencil(h);
  Real best_err = std::numeric_limits<Real>::infinity();
  for (int k = 0; k < 8; ++k) {
    const C next = stencil(h / 2);
    const Real err = std::abs(next - best);
    if (err >= best_err) break;
    best_err = err;
    best = next;
    h /= 2;
    if (err <= Real(1e-3) * std::sqrt(eps) * std::abs(best)) break;
  }
  // near a zero the stencil must be small compared with the distance to it
  const Real af = std::abs(f(z));
  for (int k = 0; k < 6; ++k) {
    const Real dist = af / std::abs(best);
    if (!(dist > 0) || h <= dist / 4) break;
    h = dist / 4;
    const C next = stencil(h);
    if (!is_finite(next) || std::abs(next) == Real(0)) break;
    best = next;
  }
  return best;
}

}  // namespace detail

template <class Real>
std::pair<std::complex<Real>, std::complex<Real>> AnalyticFunction<Real>::evaluate(C z) const {
  if (value_and_derivative) return value_and_derivative(z);
  const C f = value(z);
  if (derivative) return {f, derivative(z)};
  return {f, detail::central_difference<Real>(value, z)};
}

namespace detail {

template <class Real>
class ContourIntegrator {
 public:
  using C = std::complex<Real>;

  ContourIntegrator(const AnalyticFunction<Real>& f, Real quad_tol, Real diameter)
      : f_(f), tol_(quad_tol), diameter_(diameter) {}

  /// (1/2 pi i) times the integral of f'/f over the boundary of rect, counterclockwise.
  C winding(const Rectangle<Real>& r) {
    const C corners[4] = {{r.x_lo, r.y_lo}, {r.x_hi, r.y_lo}, {r.x_hi, r.y_hi}, {r.x_lo, r.y_hi}};
    C total(0);
    for (int e = 0; e < 4; ++e) total += edge(corners[e], corners[(e + 1) % 4], tol_ / Real(4));
    return total / C(0, Real(2) * std::numbers::pi_v<Real>);
  }

 private:
  C integrand(C a, C b, Real t) {
    const C z = a + t * (b - a);
    const auto [fz, dfz] = f_.evaluate(z);
    const Real af = std::abs(fz);
    if (!(af > 0) || !is_finite(fz) || !is_finite(dfz)) throw BoundaryZeroError(describe(z));
    // Newton distance |f/f'| estimates how far the nearest zero is
    const Real adf = std::abs(dfz);
    if (adf > 0 && af / adf < Real(1e-12) * diameter_) throw BoundaryZeroError(describe(z));
    return dfz / fz * (b - a);
  }

  static std::string describe(C z) {
    std::ostringstream os;
    os << "zero suspected on the contour near (" << double(z.real()) << ", " << double(z.imag())
       << "); perturb the rectangle";
    return os.str();
  }

  struct Panel {
    Real t0, t1;
    C value;
    Real error;
  };

  // 7-point Gauss / 15-point Kronrod pair on [t0, t1]
  Panel kronrod(C a, C b, Real t0, Real t1) {
    static constexpr long double xk[8] = {
        0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
        0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
        0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
        0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
    static constexpr long double wk[8] = {
        0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
        0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
        0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
        0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
    static constexpr long double wg[4] = {
        0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
        0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};
    const Real half = (t1 - t0) / 2, mid = (t0 + t1) / 2;
    C kr = Real(wk[7]) * integrand(a, b, mid);
    C ga = Real(wg[3]) * integrand(a, b, mid);
    for (int j = 0; j < 7; ++j) {
      const C g = integrand(a, b, mid - half * Real(xk[j])) + integrand(a, b, mid + half * Real(xk[j]));
      kr += Real(wk[j]) * g;
      if (j % 2 == 1) ga += Real(wg[j / 2]) * g;
    }
    return {t0, t1, kr * half, std::abs(kr - ga) * half};
  }

  // globally adaptive: always split the panel with the largest error estimate
  C edge(C a, C b, Real tol) {
    constexpr int initial = 4, max_panels = 4000;
    std::vector<Panel> panels;
    for (int p = 0; p < initial; ++p) panels.push_back(kronrod(a, b, Real(p) / initial, Real(p + 1) / initial));
    auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
    std::make_heap(panels.begin(), panels.end(), worse);
    while (true) {
      C sum(0);
      Real err = 0, mag = 0;
      for (const auto& p : panels) {
        sum += p.value;
        err += p.error;
        mag += std::abs(p.value);
      }
      const Real floor = Real(64) * std::numeric_limits<Real>::epsilon() * mag;
      if (err <= std::max(tol, floor)) return sum;
      if (static_cast<int>(panels.size()) >= max_panels) {
        // a count only needs to be resolved to well below one half
        if (err < Real(1e-3)) return sum;
        throw QuadratureError("contour quadrature did not converge");
      }
      std::pop_heap(panels.begin(), panels.end(), worse);
      const Panel p = panels.back();
      panels.pop_back();
      const Real tm = (p.t0 + p.t1) / 2;
      panels.push_back(kronrod(a, b, p.t0, tm));
      std::push_heap(panels.begin(), panels.end(), worse);
      panels.push_back(kronrod(a, b, tm, p.t1));
      std::push_heap(panels.begin(), panels.end(), worse);
    }
  }

  const AnalyticFunction<Real>& f_;
  Real tol_;
  Real diameter_;
};

template <class Real>
void check_admissible(const AnalyticFunction<Real>& f, const Rectangle<Real>& rect) {
  for (const auto& ex : f.exclusion)
    if (rect.intersects(ex)) throw DomainError("search rectangle intersects the exclusion set of the function");
}

}  // namespace detail

/// Number of zeros of f inside rect, counted with multiplicity.
template <class Real>
int winding_number(const AnalyticFunction<Real>& f, const Rectangle<Real>& rect, Real quad_tol = Real(1e-10)) {
  rect.validate();
  detail::check_admissible(f, rect);
  detail::ContourIntegrator<Real> integ(f, quad_tol, std::hypot(rect.width(), rect.height()));
  const std::complex<Real> n = integ.winding(rect);
  const Real rounded = std::round(n.real());
  if (std::abs(n - std::complex<Real>(rounded, 0)) > Real(0.25)) {
    std::ostringstream os;
    os << "contour integral " << double(n.real()) << (n.imag() < 0 ? "" : "+") << double(n.imag())
       << "i is not close to an integer";
    throw QuadratureError(os.str());
  }
  return static_cast<int>(rounded);
}

namespace detail {

template <class Real>
struct NewtonResult {
  std::complex<Real> z;
  Real residual;
  bool converged;
  Real last_step;
};

template <class Real>
NewtonResult<Real> damped_newton(const AnalyticFunction<Real>& f, std::complex<Real> z, Real max_step,
                                 int multiplicity, int max_iter = 100) {
  using C = std::complex<Real>;
  const Real eps = std::numeric_limits<Real>::epsilon();
  auto [fz, dfz] = f.evaluate(z);
  Real last = std::numeric_limits<Real>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    if (std::abs(fz) == Real(0)) return {z, Real(0), true, Real(0)};
    C dz = Real(multiplicity) * fz / dfz;
    if (!is_finite(dz)) return {z, std::abs(fz), false, last};
    if (std::abs(dz) > max_step) dz *= max_step / std::abs(dz);
    C trial = z - dz;
    auto [ft, dft] = f.evaluate(trial);
    int halvings = 0;
    while (!(std::abs(ft) < std::abs(fz)) && halvings < 30) {
      dz /= Real(2);
      trial = z - dz;
      std::tie(ft, dft) = f.evaluate(trial);
      ++halvings;
    }
    const Real tiny = Real(8) * eps * std::max(Real(1), std::abs(z));
    if (halvings == 30) {
      // no further decrease possible: we sit at the noise floor of f
      return {z, std::abs(fz), last < Real(1e-6) * max_step || std::abs(dz) <= tiny, last};
    }
    last = std::abs(dz);
    z = trial;
    fz = ft;
    dfz = dft;
    if (last <= tiny) return {z, std::abs(fz), true, last};
  }
  return {z, std::abs(fz), false, last};
}

template <class Real>
class ZeroFinder {
 public:
  using C = std::complex<Real>;

  ZeroFinder(const AnalyticFunction<Real>& f, const RootOptions& opts)
      : f_(f), opts_(opts), rng_(opts.seed) {}

  RootSet<Real> run(Rectangle<Real> rect) {
    rect.validate();
    detail::check_admissible(f_, rect);
    int count = 0;
    for (int attempt = 0;; ++attempt) {
      try {
        count = winding(rect);
        break;
      } catch (const BoundaryZeroError&) {
        if (attempt >= opts_.max_retries) throw;
        std::uniform_real_distribution<double> grow(1.01, 1.05);
        rect = rect.inflated(Real(grow(rng_)));
        detail::check_admissible(f_, rect);
      }
    }
    RootSet<Real> out;
    subdivide(rect, count, 0, out);
    std::sort(out.roots.begin(), out.roots.end(), [](const Root<Real>& a, const Root<Real>& b) {
      return a.location.real() != b.location.real() ? a.location.real() < b.location.real()
                                                    : a.location.imag() < b.location.imag();
    });
    out.total_count = 0;
    for (const auto& r : out.roots) out.total_count += r.multiplicity;
    return out;
  }

 private:
  int winding(const Rectangle<Real>& r, Real quad_tol = Real(-1)) {
    if (quad_tol < 0) quad_tol = Real(opts_.quad_tol);
    ContourIntegrator<Real> integ(f_, quad_tol, std::hypot(r.width(), r.height()));
    const C n = integ.winding(r);
    const Real rounded = std::round(n.real());
    if (std::abs(n - C(rounded, 0)) > Real(0.25)) throw QuadratureError("contour integral is not close to an integer");
    return static_cast<int>(rounded);
  }

  void subdivide(const Rectangle<Real>& r, int count, int depth, RootSet<Real>& out) {
    if (count <= 0) return;
    const Real diam = std::hypot(r.width(), r.height());
    if (count == 1) {
      const auto res = damped_newton(f_, r.center(), diam, 1);
      if (res.converged && r.contains(res.z, Real(1e-9) * diam)) {
        out.roots.push_back({res.z, 1, res.residual});
        return;
      }
      if (depth >= opts_.max_depth) {
        // the contour says one zero is here; report the best estimate we have
        out.roots.push_back({res.converged ? res.z : r.center(), 1, std::abs(f_.evaluate(r.center()).first)});
        return;
      }
    } else {
      if (diam < Real(0.05) * std::max(Real(1), std::abs(r.center())) && try_multiple(r, count, out)) return;
      if (depth >= opts_.max_depth) {
        std::ostringstream os;
        os << count << " zeros could not be separated in [" << double(r.x_lo) << ", " << double(r.x_hi) << "] x ["
           << double(r.y_lo) << ", " << double(r.y_hi) << "]";
        throw ClusterUnresolvedError(os.str(), double(r.x_lo), double(r.x_hi), double(r.y_lo), double(r.y_hi),
                                     count);
      }
    }
    bisect(r, count, depth, out);
  }

  bool try_multiple(const Rectangle<Real>& r, int count, RootSet<Real>& out) {
    const Real diam = std::hypot(r.width(), r.height());
    const auto res = damped_newton(f_, r.center(), diam, count);
    if (!res.converged || !r.contains(res.z, Real(1e-9) * diam)) return false;
    const Real scale = std::max(Real(1), std::abs(res.z));
    const Real half = std::max({Real(1e-6) * scale, Real(1e-4) * diam, Real(100) * res.last_step});
    const Rectangle<Real> probe(res.z.real() - half, res.z.real() + half, res.z.imag() - half,
                                res.z.imag() + half);
    try {
      // the probe only confirms a count, and f is noisy this close to a multiple zero
      if (winding(probe, Real(1e-6)) != count) return false;
    } catch (const Error&) {
      return false;
    }
    out.roots.push_back({res.z, count, res.residual});
    return true;
  }

  void bisect(const Rectangle<Real>& r, int count, int depth, RootSet<Real>& out) {
    const bool vertical_cut = r.width() >= r.height();
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);
    for (int attempt = 0; attempt <= opts_.max_retries + 3; ++attempt) {
      const Real frac = attempt == 0 ? Real(0.5) : Real(0.5 + jitter(rng_));
      Rectangle<Real> a = r, b = r;
      if (vertical_cut) {
        const Real xm = r.x_lo + frac * r.width();
        a.x_hi = xm;
        b.x_lo = xm;
      } else {
        const Real ym = r.y_lo + frac * r.height();
        a.y_hi = ym;
        b.y_lo = ym;
      }
      int ca = 0, cb = 0;
      try {
        ca = winding(a);
        cb = winding(b);
      } catch (const BoundaryZeroError&) {
        continue;
      }
      if (ca + cb != count || ca < 0 || cb < 0) continue;
      subdivide(a, ca, depth + 1, out);
      subdivide(b, cb, depth + 1, out);
      return;
    }
    throw QuadratureError("could not find an admissible bisection of a rectangle holding " + std::to_string(count) +
                          " zeros");
  }

  const AnalyticFunction<Real>& f_;
  RootOptions opts_;
  std::mt19937 rng_;
};

}  // namespace detail

/// All zeros of f in rect with multiplicities.
template <class Real>
RootSet<Real> find_zeros(const AnalyticFunction<Real>& f, const Rectangle<Real>& rect,
                         const RootOptions& opts = {}) {
  detail::ZeroFinder<Real> finder(f, opts);
  return finder.run(rect);
}

/// Exclusion regions of f grown by the standoff distance.
template <class Real>
std::vector<Rectangle<Real>> grown_exclusion(const AnalyticFunction<Real>& f, Real standoff) {
  std::vector<Rectangle<Real>> holes;
  for (const auto& ex : f.exclusion)
    holes.push_back({ex.x_lo - standoff, ex.x_hi + standoff, ex.y_lo - standoff, ex.y_hi + standoff});
  return holes;
}

/// find_zeros over rect minus the exclusion set (grown by opts.standoff).
/// Zeros inside the standoff band are not reported.
template <class Real>
RootSet<Real> find_zeros_admissible(const AnalyticFunction<Real>& f, const Rectangle<Real>& rect,
                                    const RootOptions& opts = {}) {
  rect.validate();
  const Real standoff = Real(opts.standoff);
  const auto pieces = subtract(rect, grown_exclusion(f, standoff), standoff / 4);
  AnalyticFunction<Real> g = f;
  g.exclusion.clear();  // pieces already keep their distance
  RootSet<Real> all;
  for (const auto& p : pieces) {
    const auto part = find_zeros(g, p, opts);
    for (const auto& r : part.roots) {
      const bool dup = std::any_of(all.roots.begin(), all.roots.end(), [&](const Root<Real>& q) {
        return std::abs(q.location - r.location) <= Real(1e-10) * std::max(Real(1), std::abs(r.location));
      });
      if (!dup) all.roots.push_back(r);
    }
  }
  std::sort(all.roots.begin(), all.roots.end(), [](const Root<Real>& a, const Root<Real>& b) {
    return a.location.real() != b.location.real() ? a.location.real() < b.location.real()
                                                  : a.location.imag() < b.location.imag();
  });
  for (const auto& r : all.roots) all.total_count += r.multiplicity;
  return all;
}

}  // namespace specbar

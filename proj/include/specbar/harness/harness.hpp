#pragma once

// R-sweeps against a fixed target and least-squares rate fits.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "specbar/core/errors.hpp"
#include "specbar/core/geometry.hpp"
#include "specbar/core/parallel.hpp"
#include "specbar/rootfinder/rootfinder.hpp"
#include "specbar/sturm/sturm.hpp"

namespace specbar {

template <class Real = double>
struct ConvergenceRecord {
  Real R = 0;
  std::complex<Real> matched{};
  std::complex<Real> target{};
  /// |matched - target|, or +inf when nothing was found for this R
  Real error = std::numeric_limits<Real>::infinity();

  bool matched_any() const { return std::isfinite(error); }
};

enum class RateKind { exponential, power };

inline const char* to_string(RateKind k) { return k == RateKind::exponential ? "exponential" : "power"; }

inline RateKind parse_rate_kind(const std::string& s) {
  if (s == "exponential") return RateKind::exponential;
  if (s == "power") return RateKind::power;
  throw ArgumentError("unknown rate kind '" + s + "'");
}

struct RateFit {
  RateKind kind = RateKind::exponential;
  double rate = 0.0;
  double prefactor = 0.0;
  double r_squared = 0.0;
};

/// Index of the root nearest to target; ties go to the lexicographically smaller location.
template <class Real>
long nearest_root(const RootSet<Real>& roots, std::complex<Real> target) {
  long best = -1;
  Real best_d = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < roots.roots.size(); ++i) {
    const auto z = roots.roots[i].location;
    const Real d = std::abs(z - target);
    bool take = d < best_d;
    if (d == best_d && best >= 0) {
      const auto b = roots.roots[best].location;
      take = z.real() < b.real() || (z.real() == b.real() && z.imag() < b.imag());
    }
    if (take) {
      best = static_cast<long>(i);
      best_d = d;
    }
  }
  return best;
}

/// Records for each R the eigenvalue of family(R) in rect closest to target.
/// family maps R to a CharacteristicContext; R values are processed in parallel.
template <class Real = double, class Family>
std::vector<ConvergenceRecord<Real>> run_sweep(const Family& family, const std::vector<Real>& R_grid,
                                               std::complex<Real> target, const Rectangle<Real>& rect,
                                               const RootOptions& opts = {}) {
  if (R_grid.empty()) throw ArgumentError("R grid is empty");
  for (std::size_t i = 1; i < R_grid.size(); ++i)
    if (!(R_grid[i] > R_grid[i - 1])) throw ArgumentError("R grid must be strictly increasing");
  rect.validate();
  std::vector<ConvergenceRecord<Real>> out(R_grid.size());
  parallel_for(R_grid.size(), [&](std::size_t i) {
    ConvergenceRecord<Real> rec;
    rec.R = R_grid[i];
    rec.target = target;
    const CharacteristicContext ctx = family(R_grid[i]);
    const auto roots = eigenvalues<Real>(ctx, rect, opts);
    const long j = nearest_root(roots, target);
    if (j >= 0) {
      rec.matched = roots.roots[j].location;
      rec.error = std::abs(rec.matched - target);
    }
    out[i] = rec;
  });
  if (std::none_of(out.begin(), out.end(), [](const auto& r) { return r.matched_any(); }))
    throw SweepFailureError("no eigenvalue found in the search rectangle for any R");
  return out;
}

/// Least squares of ln(error) against R (exponential: error = C e^{-rate R}) or
/// against ln R (power: error = C R^{-rate}). The first `skip` finite records
/// in increasing R are dropped.
template <class Real>
RateFit fit_rate(const std::vector<ConvergenceRecord<Real>>& records, RateKind kind, std::size_t skip = 2) {
  std::vector<std::pair<long double, long double>> pts;
  for (const auto& r : records)
    if (r.matched_any() && r.error > 0) pts.emplace_back(static_cast<long double>(r.R), static_cast<long double>(r.error));
  std::sort(pts.begin(), pts.end());
  if (pts.size() < skip + 4)
    throw InsufficientDataError("rate fit needs at least 4 finite, positive errors after skipping " +
                                std::to_string(skip) + " (have " + std::to_string(pts.size()) + ")");
  pts.erase(pts.begin(), pts.begin() + static_cast<long>(skip));
  const long double n = static_cast<long double>(pts.size());
  long double sx = 0, sy = 0;
  std::vector<long double> xs, ys;
  for (const auto& [R, e] : pts) {
    xs.push_back(kind == RateKind::exponential ? R : std::log(R));
    ys.push_back(std::log(e));
    sx += xs.back();
    sy += ys.back();
  }
  const long double mx = sx / n, my = sy / n;
  long double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0) throw InsufficientDataError("rate fit needs distinct R values");
  const long double slope = sxy / sxx;
  const long double icept = my - slope * mx;
  RateFit fit;
  fit.kind = kind;
  fit.rate = static_cast<double>(-slope);
  fit.prefactor = static_cast<double>(std::exp(icept));
  fit.r_squared = syy == 0 ? 1.0 : static_cast<double>(std::clamp<long double>(sxy * sxy / (sxx * syy), 0, 1));
  return fit;
}

}  // namespace specbar

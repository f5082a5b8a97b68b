#pragma once

// Membership tests for the enclosures of the limiting essential spectrum of
// T_0 + i gamma chi_[0,R] and for the numerical-range strip.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "specbar/core/complex.hpp"
#include "specbar/core/errors.hpp"
#include "specbar/floquet/floquet.hpp"

namespace specbar {

/// sigma_e(T_0) as sorted disjoint intervals; +-infinity marks unbounded ends.
struct EssentialSpectrumApprox {
  std::vector<std::pair<double, double>> intervals;
  std::pair<double, double> convex_hull{0.0, 0.0};

  EssentialSpectrumApprox() = default;
  explicit EssentialSpectrumApprox(std::vector<std::pair<double, double>> iv) : intervals(std::move(iv)) {
    if (intervals.empty()) throw ArgumentError("essential spectrum needs at least one interval");
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      if (!(intervals[i].first <= intervals[i].second)) throw ArgumentError("interval with left end above right end");
      if (i > 0 && intervals[i].first <= intervals[i - 1].second) throw ArgumentError("intervals must be disjoint");
    }
    convex_hull = {intervals.front().first, intervals.back().second};
  }

  /// [0, inf), the essential spectrum for q = 0 tails.
  static EssentialSpectrumApprox half_line() {
    return EssentialSpectrumApprox({{0.0, std::numeric_limits<double>::infinity()}});
  }

  /// Bands of a periodic tail over [z_min, z_max]; a band cut by z_max is continued to +inf.
  static EssentialSpectrumApprox from_bands(const BandStructure<double>& b, bool open_right = true) {
    auto iv = b.bands;
    if (open_right && b.clipped_right && !iv.empty()) iv.back().second = std::numeric_limits<double>::infinity();
    return EssentialSpectrumApprox(std::move(iv));
  }

  double distance(double x) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& [l, r] : intervals) d = std::min(d, x < l ? l - x : (x > r ? x - r : 0.0));
    return d;
  }

  bool contains(double x, double slack = 0.0) const { return distance(x) <= slack; }
};

struct StripParams {
  double gamma = 1.0;
  double s_minus = 0.0;
  double s_plus = 1.0;

  void validate() const {
    if (!(gamma > 0)) throw ArgumentError("strip requires gamma > 0");
    if (!(s_minus <= s_plus)) throw ArgumentError("strip requires s_minus <= s_plus");
  }
};

/// Im lambda in [0, gamma] and dist(Re lambda, sigma_e) <= sqrt(Im lambda (gamma - Im lambda)).
inline bool gamma_a_contains(cdouble lambda, const EssentialSpectrumApprox& sigma_e, double gamma,
                             double slack = 0.0) {
  if (!(gamma > 0)) throw ArgumentError("gamma_a_contains requires gamma > 0");
  const double y = lambda.imag();
  if (y < -slack || y > gamma + slack) return false;
  const double yc = std::clamp(y, 0.0, gamma);
  return sigma_e.distance(lambda.real()) <= std::sqrt(yc * (gamma - yc)) + slack;
}

/// Re lambda in sigma_e and Im lambda in gamma [s_-, s_+].
inline bool gamma_b_contains(cdouble lambda, const EssentialSpectrumApprox& sigma_e, const StripParams& strip,
                             double slack = 0.0) {
  strip.validate();
  const double y = lambda.imag();
  return sigma_e.contains(lambda.real(), slack) && y >= strip.gamma * strip.s_minus - slack &&
         y <= strip.gamma * strip.s_plus + slack;
}

/// Re lambda in the convex hull of sigma_e and Im lambda in gamma [s_-, s_+].
inline bool we_strip_contains(cdouble lambda, const EssentialSpectrumApprox& sigma_e, const StripParams& strip,
                              double slack = 0.0) {
  strip.validate();
  const double x = lambda.real(), y = lambda.imag();
  return x >= sigma_e.convex_hull.first - slack && x <= sigma_e.convex_hull.second + slack &&
         y >= strip.gamma * strip.s_minus - slack && y <= strip.gamma * strip.s_plus + slack;
}

/// -i (sqrt(lambda - i gamma) + sqrt(lambda)), principal branches.
template <class Real = double>
std::complex<Real> l1_lambda_limit(std::complex<Real> lambda, std::complex<Real> gamma) {
  const std::complex<Real> I(0, 1);
  return -I * (principal_sqrt(lambda - I * gamma) + principal_sqrt(lambda));
}

}  // namespace specbar

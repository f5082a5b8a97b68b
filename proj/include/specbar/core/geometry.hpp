#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include "specbar/core/errors.hpp"

namespace specbar {

/// Closed axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi] in the complex
/// plane. Infinite bounds are allowed for exclusion regions only.
template <class Real = double>
struct Rectangle {
  Real x_lo{}, x_hi{}, y_lo{}, y_hi{};

  Rectangle() = default;
  Rectangle(Real x_lo, Real x_hi, Real y_lo, Real y_hi) : x_lo(x_lo), x_hi(x_hi), y_lo(y_lo), y_hi(y_hi) {}

  template <class Other>
  explicit Rectangle(const Rectangle<Other>& o)
      : x_lo(Real(o.x_lo)), x_hi(Real(o.x_hi)), y_lo(Real(o.y_lo)), y_hi(Real(o.y_hi)) {}

  void validate() const {
    if (!(x_lo < x_hi) || !(y_lo < y_hi)) throw ArgumentError("rectangle requires x_lo < x_hi and y_lo < y_hi");
  }

  Real width() const { return x_hi - x_lo; }
  Real height() const { return y_hi - y_lo; }
  std::complex<Real> center() const { return {(x_lo + x_hi) / 2, (y_lo + y_hi) / 2}; }

  bool contains(const std::complex<Real>& z, Real slack = 0) const {
    return z.real() >= x_lo - slack && z.real() <= x_hi + slack && z.imag() >= y_lo - slack &&
           z.imag() <= y_hi + slack;
  }

  bool intersects(const Rectangle& o) const {
    return !(o.x_hi < x_lo || o.x_lo > x_hi || o.y_hi < y_lo || o.y_lo > y_hi);
  }

  Rectangle inflated(Real factor) const {
    const Real cx = (x_lo + x_hi) / 2, cy = (y_lo + y_hi) / 2;
    const Real hw = width() / 2 * factor, hh = height() / 2 * factor;
    return {cx - hw, cx + hw, cy - hh, cy + hh};
  }
};

/// Parts of `rect` not covered by any of `holes`, as a list of rectangles.
/// Pieces thinner than `min_size` are dropped.
template <class Real>
std::vector<Rectangle<Real>> subtract(const Rectangle<Real>& rect, const std::vector<Rectangle<Real>>& holes,
                                      Real min_size = Real(0)) {
  std::vector<Rectangle<Real>> pieces{rect};
  for (const auto& hole : holes) {
    std::vector<Rectangle<Real>> next;
    for (const auto& p : pieces) {
      if (!p.intersects(hole)) {
        next.push_back(p);
        continue;
      }
      // below and above the hole span the full width; left/right fill the middle band
      const Real mid_lo = std::max(p.y_lo, hole.y_lo), mid_hi = std::min(p.y_hi, hole.y_hi);
      if (hole.y_lo > p.y_lo) next.push_back({p.x_lo, p.x_hi, p.y_lo, hole.y_lo});
      if (hole.y_hi < p.y_hi) next.push_back({p.x_lo, p.x_hi, hole.y_hi, p.y_hi});
      if (hole.x_lo > p.x_lo) next.push_back({p.x_lo, hole.x_lo, mid_lo, mid_hi});
      if (hole.x_hi < p.x_hi) next.push_back({hole.x_hi, p.x_hi, mid_lo, mid_hi});
    }
    pieces = std::move(next);
  }
  std::vector<Rectangle<Real>> out;
  for (const auto& p : pieces)
    if (p.width() > min_size && p.height() > min_size) out.push_back(p);
  return out;
}

}  // namespace specbar

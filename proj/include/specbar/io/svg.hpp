#pragma once

// Static SVG scatter plots of points in the complex plane, with optional
// shaded rectangles (bands on the real axis and their shifted copies).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "specbar/core/complex.hpp"

namespace specbar::io {

struct ScatterSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<cdouble> points;
};

struct ShadedRegion {
  double x_lo, x_hi, y_lo, y_hi;
  std::string color = "#dddddd";
};

struct ScatterPlot {
  std::string title;
  std::string x_label = "Re";
  std::string y_label = "Im";
  std::vector<ScatterSeries> series;
  std::vector<ShadedRegion> shading;
  /// plot window; computed from the data when lo >= hi
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;

  void write(std::ostream& os) const;
};

namespace detail {

inline std::string fmt(double v, const char* f = "%.6g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

inline double nice_step(double span) {
  const double raw = span / 6;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10 * mag;
}

}  // namespace detail

inline void ScatterPlot::write(std::ostream& os) const {
  const double W = 720, H = 480, ml = 70, mr = 150, mt = 40, mb = 55;
  double xa = x_lo, xb = x_hi, ya = y_lo, yb = y_hi;
  if (!(xa < xb) || !(ya < yb)) {
    xa = ya = std::numeric_limits<double>::infinity();
    xb = yb = -std::numeric_limits<double>::infinity();
    for (const auto& s : series)
      for (const auto& z : s.points) {
        xa = std::min(xa, z.real());
        xb = std::max(xb, z.real());
        ya = std::min(ya, z.imag());
        yb = std::max(yb, z.imag());
      }
    if (!std::isfinite(xa)) xa = -1, xb = 1, ya = -1, yb = 1;
    const double px = std::max(1e-3, 0.05 * (xb - xa)), py = std::max(1e-3, 0.05 * (yb - ya));
    xa -= px, xb += px, ya -= py, yb += py;
  }
  const double pw = W - ml - mr, ph = H - mt - mb;
  auto sx = [&](double x) { return ml + (x - xa) / (xb - xa) * pw; };
  auto sy = [&](double y) { return mt + (yb - y) / (yb - ya) * ph; };
  using detail::fmt;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<clipPath id=\"plot\"><rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\"/></clipPath>\n";
  os << "<g clip-path=\"url(#plot)\">\n";
  for (const auto& r : shading) {
    const double x0 = std::clamp(sx(r.x_lo), ml - 1, ml + pw + 1), x1 = std::clamp(sx(r.x_hi), ml - 1, ml + pw + 1);
    double y0 = std::clamp(sy(r.y_hi), mt - 1, mt + ph + 1), y1 = std::clamp(sy(r.y_lo), mt - 1, mt + ph + 1);
    if (y1 - y0 < 2) y0 -= 1.5, y1 += 1.5;  // degenerate (line) regions
    os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(std::max(x1 - x0, 1.0))
       << "\" height=\"" << fmt(y1 - y0) << "\" fill=\"" << r.color << "\"/>\n";
  }
  for (const auto& s : series)
    for (const auto& z : s.points) {
      if (z.real() < xa || z.real() > xb || z.imag() < ya || z.imag() > yb) continue;
      os << "<circle cx=\"" << fmt(sx(z.real())) << "\" cy=\"" << fmt(sy(z.imag())) << "\" r=\"2.5\" fill=\""
         << s.color << "\"/>\n";
    }
  os << "</g>\n";

  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  const double dx = detail::nice_step(xb - xa), dy = detail::nice_step(yb - ya);
  for (double t = std::ceil(xa / dx) * dx; t <= xb; t += dx) {
    const double v = std::abs(t) < 1e-12 * dx ? 0.0 : t;
    os << "<line x1=\"" << fmt(sx(v)) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt(sx(v)) << "\" y2=\""
       << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt(sx(v)) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">" << fmt(v)
       << "</text>\n";
  }
  for (double t = std::ceil(ya / dy) * dy; t <= yb; t += dy) {
    const double v = std::abs(t) < 1e-12 * dy ? 0.0 : t;
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(sy(v)) << "\" x2=\"" << ml << "\" y2=\"" << fmt(sy(v))
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(sy(v) + 4) << "\" text-anchor=\"end\">" << fmt(v)
       << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  os << "<text x=\"18\" y=\"" << mt + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << mt + ph / 2 << ")\">" << y_label << "</text>\n";
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
     << "</text>\n";
  double ly = mt + 10;
  for (const auto& s : series) {
    os << "<circle cx=\"" << W - mr + 16 << "\" cy=\"" << ly << "\" r=\"4\" fill=\"" << s.color << "\"/>\n";
    os << "<text x=\"" << W - mr + 26 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
}

}  // namespace specbar::io

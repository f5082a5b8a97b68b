#pragma once

// CSV and JSON writers. Numbers are printed with %.17g so that output is
// byte-identical across runs with the same inputs.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "specbar/core/complex.hpp"
#include "specbar/fdtrunc/fdtrunc.hpp"
#include "specbar/floquet/floquet.hpp"
#include "specbar/harness/harness.hpp"
#include "specbar/rootfinder/rootfinder.hpp"

namespace specbar::io {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string num(long double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return buf;
}

template <class Real>
void write_roots_csv(std::ostream& os, const RootSet<Real>& roots, double R, Sheet sheet, bool header = true) {
  if (header) os << "re_lambda,im_lambda,multiplicity,residual,R,sheet\n";
  for (const auto& r : roots.roots)
    os << num(r.location.real()) << ',' << num(r.location.imag()) << ',' << r.multiplicity << ','
       << num(r.residual) << ',' << num(R) << ',' << to_string(sheet) << '\n';
}

template <class Real>
void write_bands_csv(std::ostream& os, const BandStructure<Real>& b) {
  os << "band_index,z_left,z_right\n";
  for (std::size_t i = 0; i < b.bands.size(); ++i)
    os << i << ',' << num(b.bands[i].first) << ',' << num(b.bands[i].second) << '\n';
}

inline void write_fd_csv(std::ostream& os, double R, double X, double h, const ClassifiedSpectrum& cs,
                         bool header = true) {
  if (header) os << "R,X,h,re_lambda,im_lambda,class\n";
  auto rows = [&](const std::vector<cdouble>& zs, const char* cls) {
    for (const auto& z : zs)
      os << num(R) << ',' << num(X) << ',' << num(h) << ',' << num(z.real()) << ',' << num(z.imag()) << ',' << cls
         << '\n';
  };
  rows(cs.pollution_real, "pollution");
  rows(cs.essential_approx, "essential");
  rows(cs.discrete_candidates, "discrete");
}

template <class Real>
void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRecord<Real>>& records) {
  os << "R,re_matched,im_matched,error\n";
  for (const auto& r : records) {
    os << num(r.R) << ',';
    if (r.matched_any()) os << num(r.matched.real()) << ',' << num(r.matched.imag()) << ',' << num(r.error) << '\n';
    else os << "nan,nan,inf\n";
  }
}

inline nlohmann::json rate_fit_json(const RateFit& f) {
  return {{"kind", to_string(f.kind)}, {"rate", f.rate}, {"prefactor", f.prefactor}, {"r2", f.r_squared}};
}

}  // namespace specbar::io

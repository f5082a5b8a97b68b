#pragma once

// Command-line driver. Verbs: spectrum, resonances, limit, bands, sp,
// converge, fd, enclose; --preset fig1|fig2|fig3 reproduces the three
// figures. Exit codes: 0 success, 1 computation error, 2 usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specbar/core/model_io.hpp"
#include "specbar/enclosures/enclosures.hpp"
#include "specbar/fdtrunc/fdtrunc.hpp"
#include "specbar/floquet/floquet.hpp"
#include "specbar/harness/harness.hpp"
#include "specbar/io/csv.hpp"
#include "specbar/io/svg.hpp"
#include "specbar/sturm/sturm.hpp"

namespace specbar::cli {

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::vector<double> split_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot parse number '" + item + "' in '" + s + "'");
    }
  }
  return out;
}

/// Barrier strength: a single number is a real gamma; a pair "re,im" is the
/// coefficient i gamma of chi_[0,R], so "0,1" means gamma = 1.
inline cdouble parse_gamma(const std::string& s) {
  const auto v = split_numbers(s, ',');
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return cdouble(v[1], -v[0]);
  throw UsageError("expected gamma or re,im of i*gamma but got '" + s + "'");
}

/// "re,im" or "re".
inline cdouble parse_complex(const std::string& s) {
  const auto v = split_numbers(s, ',');
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  throw UsageError("expected re,im but got '" + s + "'");
}

/// "x_lo,x_hi,y_lo,y_hi".
inline Rectangle<double> parse_rect(const std::string& s) {
  const auto v = split_numbers(s, ',');
  if (v.size() != 4) throw UsageError("expected x_lo,x_hi,y_lo,y_hi but got '" + s + "'");
  Rectangle<double> r(v[0], v[1], v[2], v[3]);
  if (!(r.x_lo < r.x_hi && r.y_lo < r.y_hi)) throw UsageError("rectangle '" + s + "' is empty");
  return r;
}

inline std::pair<double, double> parse_interval(const std::string& s) {
  const auto v = split_numbers(s, ',');
  if (v.size() != 2 || !(v[0] < v[1])) throw UsageError("expected lo,hi with lo < hi but got '" + s + "'");
  return {v[0], v[1]};
}

/// "start:step:stop" (stop included), a comma list, or a single value.
inline std::vector<double> parse_grid(const std::string& s) {
  if (s.find(':') == std::string::npos) return split_numbers(s, ',');
  const auto v = split_numbers(s, ':');
  if (v.size() != 3 || !(v[1] > 0) || v[2] < v[0]) throw UsageError("expected start:step:stop but got '" + s + "'");
  std::vector<double> out;
  const long n = std::lround(std::floor((v[2] - v[0]) / v[1] + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(v[0] + double(i) * v[1]);
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

inline void write_svg(const std::string& path, const io::ScatterPlot& plot) {
  if (path.empty()) return;
  Output out(path);
  plot.write(out.stream());
}

inline const char* palette(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  return colors[i % 7];
}

inline std::vector<cdouble> locations(const RootSet<double>& rs) {
  std::vector<cdouble> out;
  for (const auto& r : rs.roots) out.push_back(r.location);
  return out;
}

/// sigma_e(T_0) restricted to a window, with unbounded ends kept open.
inline EssentialSpectrumApprox essential_spectrum(const PotentialModel& m, double lo, double hi, double step) {
  if (!m.has_periodic_tail()) return EssentialSpectrumApprox::half_line();
  auto b = bands<double>(m, lo, hi, 1e-10, 2000, step);
  if (b.bands.empty()) throw Error("no band of the periodic tail in [" + io::num(lo) + ", " + io::num(hi) + "]");
  auto iv = b.bands;
  if (b.clipped_left) iv.front().first = -std::numeric_limits<double>::infinity();
  if (b.clipped_right) iv.back().second = std::numeric_limits<double>::infinity();
  return EssentialSpectrumApprox(iv);
}

/// Columns sigma_e x [y_lo, y_hi] for a plot.
inline std::vector<io::ShadedRegion> band_shading(const EssentialSpectrumApprox& s, double y_lo, double y_hi) {
  std::vector<io::ShadedRegion> out;
  for (const auto& [l, r] : s.intervals) out.push_back({std::max(l, -1e6), std::min(r, 1e6), y_lo, y_hi, "#d6ecfa"});
  return out;
}

inline RootOptions root_options(double standoff) {
  RootOptions o;
  o.standoff = standoff;
  return o;
}

inline void fd_sweep(const PotentialModel& model, cdouble gamma, const std::vector<double>& Rs, double offset,
                     double h, std::size_t cap, std::pair<double, double> band_range, double tol_band,
                     double ode_step, std::ostream& csv, io::ScatterPlot* plot) {
  const auto sigma = essential_spectrum(model, band_range.first, band_range.second, ode_step);
  std::vector<ClassifiedSpectrum> results(Rs.size());
  parallel_for(Rs.size(), [&](std::size_t i) {
    const BarrierProblem p(model, gamma, Rs[i]);
    const auto t = build_matrix(p, Rs[i] + offset, h);
    results[i] = classify_spectrum(eigenvalues_dense(t, cap), sigma.intervals, gamma.real(), tol_band);
  });
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    io::write_fd_csv(csv, Rs[i], Rs[i] + offset, h, results[i], i == 0);
    if (plot) {
      auto pts = results[i].pollution_real;
      pts.insert(pts.end(), results[i].essential_approx.begin(), results[i].essential_approx.end());
      pts.insert(pts.end(), results[i].discrete_candidates.begin(), results[i].discrete_candidates.end());
      plot->series.push_back({"R = " + io::num(Rs[i]), palette(i), pts});
    }
  }
  if (plot) {
    auto shade = band_shading(sigma, plot->y_lo, plot->y_hi);
    plot->shading.insert(plot->shading.end(), shade.begin(), shade.end());
  }
}

inline PotentialModel example1() { return PotentialModel::free(); }
inline PotentialModel example2(double R0 = 4.7) {
  return PotentialModel({Piece{0.0, R0, Constant{cdouble(0, 1)}}}, ZeroTail{});
}
inline PotentialModel example3() {
  return PotentialModel({}, PeriodicTail{2 * std::numbers::pi, 0.0, Sinusoid{1, 1, 0}});
}

/// Eigenvalues (principal sheet) and resonances (second sheet) of ex1/ex2 for several R.
inline void eig_res_preset(const PotentialModel& model, const std::vector<double>& Rs, const Rectangle<double>& eig,
                           const Rectangle<double>& res, const std::string& stem, const std::string& title,
                           io::ScatterPlot& plot) {
  std::vector<RootSet<double>> e(Rs.size()), r(Rs.size());
  parallel_for(2 * Rs.size(), [&](std::size_t k) {
    const std::size_t i = k / 2;
    const BarrierProblem p(model, 1.0, Rs[i]);
    if (k % 2 == 0) e[i] = eigenvalues<double>(CharacteristicContext(p, Sheet::principal), eig);
    else r[i] = resonances<double>(CharacteristicContext(p, Sheet::second), res);
  });
  Output csv(stem + ".csv");
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    io::write_roots_csv(csv.stream(), e[i], Rs[i], Sheet::principal, i == 0);
    io::write_roots_csv(csv.stream(), r[i], Rs[i], Sheet::second, false);
    auto pts = locations(e[i]);
    const auto rp = locations(r[i]);
    pts.insert(pts.end(), rp.begin(), rp.end());
    plot.series.push_back({"R = " + io::num(Rs[i]), palette(i), pts});
  }
  plot.title = title;
  plot.x_lo = eig.x_lo - 0.1;
  plot.x_hi = eig.x_hi;
  plot.y_lo = res.y_lo;
  plot.y_hi = eig.y_hi + 0.1;
  plot.shading.push_back({0.0, 1e6, 0.0, 0.0, "#999999"});
  plot.shading.push_back({0.0, 1e6, 1.0, 1.0, "#999999"});
}

inline void run_preset(const std::string& name, const std::string& dir) {
  const std::string stem = (dir.empty() ? std::string(".") : dir) + "/" + name;
  io::ScatterPlot plot;
  if (name == "fig1") {
    eig_res_preset(example1(), {5, 10, 20, 40}, {0.1, 8, 0.0, 1.0}, {0.1, 8, -2, 0.0}, stem,
                   "-u'' + i chi_[0,R] u: eigenvalues and resonances", plot);
  } else if (name == "fig2") {
    const auto model = example2();
    eig_res_preset(model, {5, 10, 20, 40}, {0.1, 6, 0.0, 2.0}, {0.1, 6, -2, 0.0}, stem,
                   "-u'' + i chi_[0,4.7] u + i chi_[0,R] u: eigenvalues, resonances and the limit operator", plot);
    const auto lim = limit_eigenvalues<double>(model, 1.0, {0.1, 6, 1.0, 2.0});
    auto emb = embedded_resonances<double>(model, {0.05, 6.0}, 1e-3);
    std::vector<cdouble> pts = locations(lim);
    Output csv(stem + "_limit.csv");
    io::write_roots_csv(csv.stream(), lim, std::numeric_limits<double>::infinity(), Sheet::principal);
    for (double mu : emb) {
      csv.stream() << io::num(mu) << ',' << io::num(1.0) << ",1,nan,inf,second\n";
      pts.push_back({mu, 1.0});
    }
    plot.series.push_back({"limit operator", "#000000", pts});
  } else if (name == "fig3") {
    const double gamma = 0.25;
    plot.title = "-u'' + sin(x) u + (i/4) chi_[0,R] u, h = 0.05, X - R = 300";
    plot.x_lo = -0.45, plot.x_hi = -0.28, plot.y_lo = -0.02, plot.y_hi = 0.3;
    Output csv(stem + ".csv");
    fd_sweep(example3(), gamma, {20, 60, 120}, 300.0, 0.05, 9000, {-1.0, 0.0}, 5e-3, default_ode_step, csv.stream(),
             &plot);
  } else {
    throw UsageError("unknown preset '" + name + "' (expected fig1, fig2 or fig3)");
  }
  write_svg(stem + ".svg", plot);
}

}  // namespace detail

/// Runs the command line; returns the process exit code.
inline int run(const std::vector<std::string>& args) {
  CLI::App app{"specbar: eigenvalues and resonances of Schroedinger operators with dissipative barriers"};
  app.name("specbar");
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string preset, out_dir = ".";
  app.add_option("--preset", preset, "Reproduce a figure: fig1, fig2 or fig3")->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  app.add_option("--out-dir", out_dir, "Directory for preset outputs");

  // shared option values
  std::string model_path, out, svg, gamma_s = "1", rect_s, range_s, R_s, mode, target_s, json_path;
  double R = 0, ode_step = default_ode_step, standoff = 1e-3, tol = 1e-10, x0 = std::nan(""), h = 0.05;
  double offset = 300, tol_band = 5e-3, mu = std::nan("");
  int grid = 2000;
  std::size_t cap = 6000, skip = 2;
  std::string band_range_s = "-1,5";

  auto add_model = [&](CLI::App* c) { c->add_option("--model", model_path, "Model file (JSON)")->required(); };
  auto add_common = [&](CLI::App* c) {
    c->add_option("--out", out, "Output CSV (default: stdout)");
    c->add_option("--ode-step", ode_step, "RK4 step for sinusoidal pieces")->check(CLI::PositiveNumber);
  };

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of T_R in a rectangle");
  auto* resonances_cmd = app.add_subcommand("resonances", "Second-sheet zeros of the characteristic function");
  for (auto* c : {spectrum, resonances_cmd}) {
    add_model(c);
    add_common(c);
    c->add_option("--gamma", gamma_s, "Barrier strength: gamma, or re,im of i*gamma");
    c->add_option("--R", R, "Barrier length")->required();
    c->add_option("--rect", rect_s, "Search rectangle x_lo,x_hi,y_lo,y_hi")->required();
    c->add_option("--standoff", standoff, "Distance kept from the essential spectrum");
    c->add_option("--svg", svg, "Scatter plot output");
  }

  auto* limit = app.add_subcommand("limit", "Eigenvalues of the limit operator T_0 + i gamma");
  add_model(limit);
  add_common(limit);
  limit->add_option("--gamma", gamma_s, "Barrier strength: gamma, or re,im of i*gamma");
  limit->add_option("--rect", rect_s, "Search rectangle x_lo,x_hi,y_lo,y_hi")->required();
  limit->add_option("--standoff", standoff, "Distance kept from the essential spectrum");

  auto* bands_cmd = app.add_subcommand("bands", "Spectral bands of the periodic tail");
  add_model(bands_cmd);
  add_common(bands_cmd);
  bands_cmd->add_option("--range", range_s, "Energy window lo,hi")->required();
  bands_cmd->add_option("--tol", tol, "Band-end tolerance");
  bands_cmd->add_option("--grid", grid, "Scan points")->check(CLI::Range(16, 10000000));

  auto* sp = app.add_subcommand("sp", "Zeros of the pollution function for R_n = x0 + n a");
  add_model(sp);
  add_common(sp);
  sp->add_option("--gamma", gamma_s, "Barrier strength: gamma, or re,im of i*gamma");
  sp->add_option("--x0", x0, "Base point (default: start of the tail)");
  sp->add_option("--rect", rect_s, "Search rectangle x_lo,x_hi,y_lo,y_hi")->required();
  sp->add_option("--standoff", standoff, "Distance kept from the essential spectrum");

  auto* converge = app.add_subcommand("converge", "R-sweep against a target and rate fit");
  add_model(converge);
  add_common(converge);
  converge->add_option("--mode", mode, "eigenvalue (exponential fit) or essential (power fit)")
      ->required()
      ->check(CLI::IsMember({"eigenvalue", "essential"}));
  converge->add_option("--R", R_s, "R grid start:step:stop or list")->required();
  converge->add_option("--gamma", gamma_s, "Barrier strength: gamma, or re,im of i*gamma");
  converge->add_option("--target", target_s, "Target re,im (eigenvalue mode; default: limit eigenvalue of largest Im)");
  converge->add_option("--mu", mu, "Point of sigma_e(T_0) (essential mode; target mu + i gamma)");
  converge->add_option("--rect", rect_s, "Sweep rectangle (default: box around the target)");
  converge->add_option("--skip", skip, "Smallest R values left out of the fit");
  converge->add_option("--json", json_path, "Rate summary (default: stdout)");

  auto* fd = app.add_subcommand("fd", "Finite-difference truncation to [0, X]");
  add_model(fd);
  add_common(fd);
  fd->add_option("--gamma", gamma_s, "Barrier strength: gamma, or re,im of i*gamma");
  fd->add_option("--R", R_s, "R grid start:step:stop or list")->required();
  fd->add_option("--offset", offset, "X - R")->check(CLI::PositiveNumber);
  fd->add_option("--step", h, "Grid step h")->check(CLI::PositiveNumber);
  fd->add_option("--cap", cap, "Largest matrix size");
  fd->add_option("--band-range", band_range_s, "Window lo,hi for the band computation");
  fd->add_option("--tol-band", tol_band, "Classification tolerance");
  fd->add_option("--svg", svg, "Scatter plot output");

  auto* enclose = app.add_subcommand("enclose", "Eigenvalues of T_R tested against Gamma_a, Gamma_b and the strip");
  add_model(enclose);
  add_common(enclose);
  enclose->add_option("--gamma", gamma_s, "Barrier strength: gamma, or re,im of i*gamma (gamma real, > 0)");
  enclose->add_option("--R", R, "Barrier length")->required();
  enclose->add_option("--rect", rect_s, "Search rectangle x_lo,x_hi,y_lo,y_hi")->required();
  enclose->add_option("--standoff", standoff, "Distance kept from the essential spectrum");

  app.require_subcommand(0, 1);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
    if (preset.empty() && app.get_subcommands().empty()) throw CLI::CallForHelp();
    if (!preset.empty() && !app.get_subcommands().empty()) throw UsageError("--preset cannot be combined with a verb");
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return args.empty() ? 2 : 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "specbar: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "specbar: " << e.what() << "\n";
    return 2;
  }

  try {
    if (!preset.empty()) {
      detail::run_preset(preset, out_dir);
      return 0;
    }
    CLI::App* cmd = app.get_subcommands().front();
    const PotentialModel model = load_model(model_path);
    const cdouble gamma = detail::parse_gamma(gamma_s);
    const RootOptions opts = detail::root_options(standoff);
    detail::Output csv(out);

    if (cmd == spectrum || cmd == resonances_cmd) {
      const Sheet sheet = cmd == spectrum ? Sheet::principal : Sheet::second;
      const auto rect = detail::parse_rect(rect_s);
      const CharacteristicContext ctx(BarrierProblem(model, gamma, R), sheet, ode_step);
      const auto roots = sheet == Sheet::principal ? eigenvalues<double>(ctx, rect, opts)
                                                   : resonances<double>(ctx, rect, opts);
      io::write_roots_csv(csv.stream(), roots, R, sheet);
      io::ScatterPlot plot;
      plot.title = std::string(cmd == spectrum ? "eigenvalues" : "resonances") + ", R = " + io::num(R);
      plot.x_lo = rect.x_lo, plot.x_hi = rect.x_hi, plot.y_lo = rect.y_lo, plot.y_hi = rect.y_hi;
      plot.series.push_back({cmd->get_name(), detail::palette(0), detail::locations(roots)});
      detail::write_svg(svg, plot);
    } else if (cmd == limit) {
      const auto rect = detail::parse_rect(rect_s);
      const auto roots = limit_eigenvalues<double>(model, gamma, rect, opts, ode_step);
      io::write_roots_csv(csv.stream(), roots, std::numeric_limits<double>::infinity(), Sheet::principal);
    } else if (cmd == bands_cmd) {
      const auto [lo, hi] = detail::parse_interval(range_s);
      io::write_bands_csv(csv.stream(), bands<double>(model, lo, hi, tol, grid, ode_step));
    } else if (cmd == sp) {
      const auto rect = detail::parse_rect(rect_s);
      const double base = std::isnan(x0) ? model.tail_start() : x0;
      io::write_roots_csv(csv.stream(), sp_zeros<double>(model, gamma, base, rect, opts, ode_step), base,
                          Sheet::principal);
    } else if (cmd == converge) {
      const auto grid_R = detail::parse_grid(R_s);
      RateFit fit;
      if (mode == "eigenvalue") {
        using L = long double;
        using CL = std::complex<L>;
        CL target;
        if (!target_s.empty()) {
          target = CL(detail::parse_complex(target_s));
        } else {
          const Rectangle<L> search(0.1L, 10.0L, L(gamma.real()) - 0.95L, L(gamma.real()) + 3.0L);
          const auto lim = limit_eigenvalues<L>(model, CL(gamma), search, opts, L(ode_step));
          if (lim.empty()) throw Error("the limit operator has no eigenvalue in the default search rectangle");
          target = lim.roots.front().location;
          for (const auto& r : lim.roots)
            if (r.location.imag() > target.imag()) target = r.location;
        }
        const Rectangle<L> rect = rect_s.empty()
                                      ? Rectangle<L>(target.real() - 0.25L, target.real() + 0.25L,
                                                     target.imag() - 0.25L, target.imag() + 0.25L)
                                      : Rectangle<L>(detail::parse_rect(rect_s));
        std::vector<L> Rs(grid_R.begin(), grid_R.end());
        const auto recs = run_sweep<L>(
            [&](L r) { return CharacteristicContext(BarrierProblem(model, gamma, double(r)), Sheet::principal, ode_step); },
            Rs, target, rect, opts);
        io::write_convergence_csv(csv.stream(), recs);
        fit = fit_rate(recs, RateKind::exponential, skip);
      } else {
        if (std::isnan(mu)) throw UsageError("--mode essential requires --mu");
        const cdouble target = mu + cdouble(0, 1) * gamma;
        const Rectangle<double> rect =
            rect_s.empty() ? Rectangle<double>(target.real() - 0.5, target.real() + 0.5, target.imag() - 0.5,
                                               target.imag() + 0.5)
                           : detail::parse_rect(rect_s);
        const auto recs = run_sweep<double>(
            [&](double r) { return CharacteristicContext(BarrierProblem(model, gamma, r), Sheet::principal, ode_step); },
            grid_R, target, rect, opts);
        io::write_convergence_csv(csv.stream(), recs);
        fit = fit_rate(recs, RateKind::power, skip);
      }
      detail::Output js(json_path);
      js.stream() << io::rate_fit_json(fit).dump(2) << "\n";
    } else if (cmd == fd) {
      io::ScatterPlot plot;
      plot.title = "finite-difference eigenvalues";
      io::ScatterPlot* pp = svg.empty() ? nullptr : &plot;
      detail::fd_sweep(model, gamma, detail::parse_grid(R_s), offset, h, cap, detail::parse_interval(band_range_s),
                       tol_band, ode_step, csv.stream(), pp);
      detail::write_svg(svg, plot);
    } else if (cmd == enclose) {
      if (gamma.imag() != 0 || !(gamma.real() > 0)) throw UsageError("enclose requires a real gamma > 0");
      const auto rect = detail::parse_rect(rect_s);
      const double g = gamma.real();
      const auto sigma = detail::essential_spectrum(model, rect.x_lo - g / 2 - 1, rect.x_hi + g / 2 + 1, ode_step);
      const CharacteristicContext ctx(BarrierProblem(model, gamma, R), Sheet::principal, ode_step);
      const auto roots = eigenvalues<double>(ctx, rect, opts);
      const StripParams strip{g, 0.0, 1.0};
      auto& os = csv.stream();
      os << "re_lambda,im_lambda,gamma_a,gamma_b,strip\n";
      for (const auto& r : roots.roots)
        os << io::num(r.location.real()) << ',' << io::num(r.location.imag()) << ','
           << gamma_a_contains(r.location, sigma, g, 1e-8) << ',' << gamma_b_contains(r.location, sigma, strip, 1e-8)
           << ',' << we_strip_contains(r.location, sigma, strip, 1e-8) << '\n';
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "specbar: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "specbar: error: " << e.what() << "\n";
    return 1;
  }
}

inline int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args);
}

}  // namespace specbar::cli

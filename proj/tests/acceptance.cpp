// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "specbar/specbar.hpp"

using namespace specbar;
using C = std::complex<double>;
using L = long double;
using CL = std::complex<L>;
using Rect = Rectangle<double>;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

PotentialModel sin_model() {
  return PotentialModel({}, PeriodicTail{2 * std::numbers::pi, 0.0, Sinusoid{1, 1, 0}});
}
PotentialModel ex2_model() { return PotentialModel({Piece{0.0, 4.7, Constant{C(0, 1)}}}, ZeroTail{}); }

Outcome mathieu_bands() {
  const auto b = bands<double>(sin_model(), -1.0, 0.0);
  if (b.bands.size() != 1) return {false, std::to_string(b.bands.size()) + " bands in [-1, 0]"};
  const auto [l, r] = b.bands[0];
  const bool ok = std::abs(l + 0.3785) <= 1e-3 && std::abs(r + 0.3477) <= 1e-3;
  return {ok, "first band [" + fmt("%.6f", l) + ", " + fmt("%.6f", r) + "], tol 1e-3"};
}

// limit eigenvalue for the barrier i on [0, 4.7) from its secular equation, Newton in long double
CL secular_limit_eigenvalue(CL guess) {
  const CL I(0, 1);
  const L R0 = L(4.7);
  CL z = guess - I;
  for (int it = 0; it < 60; ++it) {
    const CL s = std::sqrt(z - I), r = std::sqrt(z);
    const CL c = std::cos(s * R0), sn = std::sin(s * R0);
    const CL g = s * c - I * r * sn;
    const CL gp = (c - s * R0 * sn) / (L(2) * s) - I * sn / (L(2) * r) - I * r * c * R0 / (L(2) * s);
    const CL step = g / gp;
    z -= step;
    if (std::abs(step) < L(1e-30)) break;
  }
  return z + I;
}

Outcome exponential_inclusion() {
  const CL target = secular_limit_eigenvalue(CL(0.3225115358, 1.9078584432));
  const std::vector<L> Rs{10, 15, 20, 25, 30, 35, 40};
  const auto recs = run_sweep<L>(
      [](L R) { return CharacteristicContext(BarrierProblem(ex2_model(), C(1, 0), double(R))); }, Rs, target,
      Rectangle<L>(target.real() - 0.25L, target.real() + 0.25L, target.imag() - 0.25L, target.imag() + 0.25L));
  const auto fit = fit_rate(recs, RateKind::exponential, 0);
  const double e30 = double(recs[4].error);
  const bool ok = fit.rate > 0 && fit.r_squared > 0.98 && e30 < 1e-6;
  return {ok, "beta = " + fmt("%.4f", fit.rate) + ", r2 = " + fmt("%.6f", fit.r_squared) +
                  ", error(R=30) = " + fmt("%.2e", e30)};
}

Outcome essential_inclusion() {
  std::vector<double> Rs;
  for (int R = 20; R <= 120; R += 10) Rs.push_back(R);
  const C target(2, 1);
  const auto recs = run_sweep<double>(
      [](double R) { return CharacteristicContext(BarrierProblem(PotentialModel::free(), C(1, 0), R)); }, Rs,
      target, Rect(1.5, 2.5, 0.5, 0.9995));
  const auto fit = fit_rate(recs, RateKind::power, 0);
  const bool ok = fit.rate >= 0.7 && fit.rate <= 1.3 && fit.r_squared > 0.9;
  return {ok, "p = " + fmt("%.4f", fit.rate) + ", r2 = " + fmt("%.4f", fit.r_squared)};
}

Outcome gamma_a_confinement() {
  const auto half = EssentialSpectrumApprox::half_line();
  std::size_t total = 0, outside = 0;
  for (double R : {10.0, 20.0, 40.0}) {
    const CharacteristicContext ctx(BarrierProblem(PotentialModel::free(), C(1, 0), R));
    for (const auto& r : eigenvalues<double>(ctx, Rect(0.05, 10, 0.01, 2)).roots) {
      ++total;
      if (!gamma_a_contains(r.location, half, 1.0, 1e-8)) ++outside;
    }
  }
  return {total > 0 && outside == 0, std::to_string(total) + " eigenvalues, " + std::to_string(outside) + " outside"};
}

Outcome rootfinder_oracle() {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  std::uniform_int_distribution<int> deg(1, 8), mult(1, 3);
  int bad = 0;
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<C, int>> roots;
    int total = 0;
    const int target = deg(rng);
    while (total < target) {
      const C z(u(rng), u(rng));
      if (std::any_of(roots.begin(), roots.end(), [&](const auto& r) { return std::abs(r.first - z) < 0.05; }))
        continue;
      const int m = std::min(mult(rng), target - total);
      roots.push_back({z, m});
      total += m;
    }
    AnalyticFunction<double> f;
    f.value_and_derivative = [roots](C z) {
      C p(1), dp(0);
      for (const auto& [r, m] : roots)
        for (int k = 0; k < m; ++k) {
          dp = dp * (z - r) + p;
          p *= (z - r);
        }
      return std::pair<C, C>(p, dp);
    };
    const auto rs = find_zeros(f, Rect(-1, 1, -1, 1));
    bool ok = rs.roots.size() == roots.size();
    for (const auto& [z, m] : roots) {
      if (!ok) break;
      const auto it = std::min_element(rs.roots.begin(), rs.roots.end(), [&](const auto& a, const auto& b) {
        return std::abs(a.location - z) < std::abs(b.location - z);
      });
      worst = std::max(worst, std::abs(it->location - z));
      ok = std::abs(it->location - z) < 1e-10 && it->multiplicity == m;
    }
    if (!ok) ++bad;
  }
  return {bad == 0, std::to_string(100 - bad) + "/100 polynomials, worst location error " + fmt("%.1e", worst)};
}

Outcome characteristic_equivalence() {
  struct Case {
    ReferenceExample ex;
    double R;
    Sheet sheet;
    Rect rect;
  };
  const std::vector<Case> cases = {
      {ReferenceExample::ex1, 10, Sheet::principal, Rect(0.1, 6, 0.0, 1.0)},
      {ReferenceExample::ex1, 25, Sheet::principal, Rect(0.1, 6, 0.0, 1.0)},
      {ReferenceExample::ex1, 10, Sheet::second, Rect(0.1, 12, -3, 0.0)},
      {ReferenceExample::ex2, 10, Sheet::principal, Rect(0.1, 6, 0.0, 2.0)},
      {ReferenceExample::ex2, 20, Sheet::principal, Rect(0.1, 6, 0.0, 2.0)},
      {ReferenceExample::ex2, 10, Sheet::second, Rect(0.1, 30, -6, 0.0)},
  };
  std::size_t zeros = 0;
  double worst = 0;
  bool ok = true;
  for (const auto& c : cases) {
    const BarrierProblem p(c.ex == ReferenceExample::ex1 ? PotentialModel::free() : ex2_model(), C(1, 0), c.R);
    const CharacteristicContext ctx(p, c.sheet);
    const auto a = c.sheet == Sheet::principal ? eigenvalues<double>(ctx, c.rect) : resonances<double>(ctx, c.rect);
    AnalyticFunction<double> f;
    f.value_and_derivative = [=](C l) {
      const auto w = reference_characteristic(c.ex, Jet<C>::variable(l), c.R, 4.7, c.sheet);
      return std::pair<C, C>(w.v, w.d);
    };
    f.exclusion = singular_set<double>(p, c.rect, default_ode_step);
    const auto b = find_zeros_admissible(f, c.rect, RootOptions{});
    if (a.size() != b.size() || a.total_count != b.total_count || a.empty()) {
      ok = false;
      continue;
    }
    std::vector<bool> used(b.size(), false);
    for (const auto& r : a.roots) {
      std::size_t best = 0;
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < b.size(); ++j)
        if (!used[j] && std::abs(b.roots[j].location - r.location) < d) d = std::abs(b.roots[j].location - r.location), best = j;
      used[best] = true;
      worst = std::max(worst, d);
    }
    zeros += a.size();
  }
  ok = ok && worst < 1e-8;
  return {ok, std::to_string(cases.size()) + " rectangles, " + std::to_string(zeros) +
                  " matched zeros, worst distance " + fmt("%.1e", worst)};
}

Outcome sp_emptiness() {
  const auto m = ex2_model();
  std::size_t found = 0;
  for (const Rect& r : {Rect(-5, 5, 0.05, 0.95), Rect(-5, 5, 1.05, 3), Rect(-5, 5, -3, -0.05)})
    found += sp_zeros<double>(m, 1.0, 4.7, r).size();
  double min_mod = std::numeric_limits<double>::infinity();
  const double standoff = 1e-3;
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j) {
      const C l(-5 + 10 * (i + 0.5) / 100, -3 + 6 * (j + 0.5) / 100);
      if (l.real() >= -standoff && (std::abs(l.imag()) < standoff || std::abs(l.imag() - 1) < standoff)) continue;
      min_mod = std::min(min_mod, std::abs(l1_lambda_limit<double>(l, C(1, 0))));
    }
  return {found == 0 && min_mod > 1e-3,
          std::to_string(found) + " S_p zeros, min |limit of Lambda| = " + fmt("%.3f", min_mod)};
}

Outcome floquet_identities() {
  const auto m = sin_model();
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> re(-0.5, 5), im(-1, 1);
  double worst_rho = 0, worst_det = 0;
  for (int i = 0; i < 100; ++i) {
    const C z(re(rng), im(rng));
    if (std::abs(z.imag()) < 1e-6) continue;
    const auto fd = floquet_data(m, z);
    worst_rho = std::max(worst_rho, std::abs(fd.rho_plus * fd.rho_minus - 1.0));
  }
  for (int i = 0; i < 100; ++i) worst_det = std::max(worst_det, std::abs(monodromy(m, C(re(rng), im(rng))).determinant() - 1.0));
  return {worst_rho < 1e-12 && worst_det < 1e-10, "max |rho+ rho- - 1| = " + fmt("%.1e", worst_rho) +
                                                       ", max |det M - 1| = " + fmt("%.1e", worst_det) +
                                                       " over Re z in [-0.5, 5], Im z in [-1, 1]"};
}

Outcome fd_calibration() {
  double worst = 0;
  for (int n : {10, 100, 1000}) {
    const double h = 1.0 / (n + 1);
    TridiagonalOperator t;
    t.n = n;
    t.h = h;
    t.diag.assign(n, 2 / (h * h));
    t.sub.assign(n - 1, -1 / (h * h));
    t.super = t.sub;
    const auto eigs = eigenvalues_dense(t);
    for (int k = 1; k <= n; ++k) {
      const double exact = 2 / (h * h) * (1 - std::cos(k * std::numbers::pi / (n + 1)));
      worst = std::max(worst, std::abs(eigs[k - 1] - exact) / exact);
    }
  }
  const double X = 12.0, h = 0.05;
  const BarrierProblem full(sin_model(), C(0.25, 0), X - h / 2);
  const auto plain = eigenvalues_dense(build_matrix(full, X, h, false));
  auto shifted = eigenvalues_dense(build_matrix(full, X, h, true));
  double shift_err = 0;
  for (const auto& z : plain) {
    const C w = z + C(0, 0.25);
    auto it = std::min_element(shifted.begin(), shifted.end(),
                               [&](C a, C b) { return std::abs(a - w) < std::abs(b - w); });
    shift_err = std::max(shift_err, std::abs(*it - w) / std::abs(plain.back()));
    shifted.erase(it);
  }
  return {worst < 1e-10 && shift_err < 1e-10,
          "closed form rel. error " + fmt("%.1e", worst) + ", shift identity " + fmt("%.1e", shift_err)};
}

Outcome fig3_phenomenology() {
  const double h = 0.05, offset = 300;
  const auto b = bands<double>(sin_model(), -1.0, 0.0);
  std::vector<std::size_t> pollution, essential;
  std::size_t n = 0;
  for (double R : {60.0, 120.0}) {
    const auto t = build_matrix(BarrierProblem(sin_model(), C(0.25, 0), R), R + offset, h);
    n = t.n;
    const auto cs = classify_spectrum(eigenvalues_dense(t, 9000), b, 0.25);
    pollution.push_back(cs.pollution_real.size());
    essential.push_back(cs.essential_approx.size());
  }
  const bool ok = pollution[0] > 0 && pollution[1] > 0 && essential[1] >= essential[0];
  return {ok, "pollution " + std::to_string(pollution[0]) + ", " + std::to_string(pollution[1]) + "; essential " +
                  std::to_string(essential[0]) + " -> " + std::to_string(essential[1]) + " (n up to " +
                  std::to_string(n) + ")"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Mathieu band reproduction", mathieu_bands},
      {"exponential eigenvalue inclusion", exponential_inclusion},
      {"essential-spectrum inclusion rate", essential_inclusion},
      {"Gamma_a confinement", gamma_a_confinement},
      {"root-finder oracle equivalence", rootfinder_oracle},
      {"characteristic-function equivalence", characteristic_equivalence},
      {"S_p emptiness for a compact barrier", sp_emptiness},
      {"Floquet identities", floquet_identities},
      {"finite-difference calibration", fd_calibration},
      {"truncation pollution phenomenology", fig3_phenomenology},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu  %-38s %s  [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  // not gated: the slower limit eigenvalue of the same sweep
  try {
    const CL target = secular_limit_eigenvalue(CL(1.3471118028, 1.5704734649));
    const std::vector<L> Rs{10, 15, 20, 25, 30, 35, 40};
    const auto recs = run_sweep<L>(
        [](L R) { return CharacteristicContext(BarrierProblem(ex2_model(), C(1, 0), double(R))); }, Rs, target,
        Rectangle<L>(target.real() - 0.25L, target.real() + 0.25L, target.imag() - 0.25L, target.imag() + 0.25L));
    const auto fit = fit_rate(recs, RateKind::exponential, 0);
    std::printf("INFO     second limit eigenvalue of the compact barrier: beta = %.4f, r2 = %.6f, error(R=30) = %.3e\n",
                fit.rate, fit.r_squared, double(recs[4].error));
  } catch (const std::exception& e) {
    std::printf("INFO     second limit eigenvalue sweep failed: %s\n", e.what());
  }
  return failures;
}

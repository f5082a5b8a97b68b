#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "specbar/floquet/floquet.hpp"

using namespace specbar;
using C = std::complex<double>;
using Rect = Rectangle<double>;

namespace {

const C I(0, 1);
const double two_pi = 2 * std::numbers::pi;

PotentialModel mathieu(double X = 0.0) { return PotentialModel({}, PeriodicTail{two_pi, X, Sinusoid{1, 1, 0}}); }
PotentialModel free_periodic() { return PotentialModel({}, PeriodicTail{1.0, 0.0, Constant{}}); }

C unscaled_value(const SolutionSample<C>& s) { return s.value * std::exp(s.log_scale); }
C unscaled_derivative(const SolutionSample<C>& s) { return s.derivative * std::exp(s.log_scale); }

std::vector<C> random_points(int n, unsigned seed, double re, double im_lo, double im_hi) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> x(-re, re), y(im_lo, im_hi);
  std::vector<C> out;
  for (int i = 0; i < n; ++i) out.emplace_back(x(rng), y(rng));
  return out;
}

}  // namespace

TEST(Monodromy, FreeTailClosedForm) {
  for (C z : {C(2, 0.5), C(-3, 0.1), C(20, -1)}) {
    const auto mon = monodromy(free_periodic(), z);
    const C k = principal_sqrt(z);
    EXPECT_LT(std::abs(mon.phi1_end - std::cos(k)), 1e-12);
    EXPECT_LT(std::abs(mon.phi2p_end - std::cos(k)), 1e-12);
    EXPECT_LT(std::abs(mon.phi2_end - std::sin(k) / k), 1e-12);
    EXPECT_LT(std::abs(mon.phi1p_end + k * std::sin(k)), 1e-11);
  }
}

TEST(Monodromy, UnitDeterminant) {
  for (C z : random_points(100, 1, 5, -1, 1)) {
    const auto mon = monodromy(mathieu(), z);
    const double size = std::abs(mon.phi1_end * mon.phi2p_end) + std::abs(mon.phi1p_end * mon.phi2_end);
    EXPECT_LT(std::abs(mon.determinant() - 1.0), 1e-10 * std::max(1.0, size)) << z;
  }
}

TEST(Monodromy, MathieuFirstBandInterior) {
  EXPECT_LT(std::abs(monodromy(mathieu(), C(-0.36, 0)).discriminant()), 2.0);
  EXPECT_THROW(monodromy(PotentialModel::free(), C(1, 0)), ArgumentError);
}

TEST(FloquetData, FreeTailExponentIsSqrt) {
  for (C z : {C(-1, 0), C(-2, 1), C(3, 2)})
    EXPECT_LT(std::abs(floquet_data(free_periodic(), z).k - principal_sqrt(z)), 1e-10) << z;
}

TEST(FloquetData, MultiplierIdentities) {
  const auto m = mathieu();
  for (C z : random_points(100, 2, 5, -1, 1)) {
    const auto fd = floquet_data(m, z);
    EXPECT_LT(std::abs(fd.rho_plus * fd.rho_minus - 1.0), 1e-12);
    EXPECT_LT(std::abs(fd.rho_plus + fd.rho_minus - fd.D), 1e-10 * std::max(1.0, std::abs(fd.D)));
    EXPECT_LE(std::abs(fd.rho_plus), 1.0 + 1e-12);
    EXPECT_GT(fd.k.imag(), 0.0) << z;
    const auto second = floquet_data(m, z, Sheet::second);
    EXPECT_EQ(second.rho_plus, fd.rho_minus);
    EXPECT_LT(second.k.imag(), 0.0);
  }
}

TEST(FloquetData, ExponentIsRealOnBandInterior) {
  const auto m = mathieu();
  const C z0(-0.36, 0);
  const C k0 = floquet_data(m, z0).k;
  EXPECT_LT(std::abs(k0.imag()), 1e-9);
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const C k = floquet_data(m, z0 + C(0, eps)).k;
    EXPECT_GT(k.imag(), 0.0);
    EXPECT_LT(std::abs(k - k0), 200 * eps) << eps;
  }
}

TEST(FloquetData, BandEndIsABranchPoint) {
  EXPECT_THROW(floquet_data(free_periodic(), C(0, 0)), BranchPointError);
}

TEST(Bands, FreeTailIsHalfLine) {
  const auto b = bands<double>(free_periodic(), -1.0, 5.0);
  ASSERT_EQ(b.bands.size(), 1u);
  EXPECT_NEAR(b.bands[0].first, 0.0, 1e-9);
  EXPECT_EQ(b.bands[0].second, 5.0);
  EXPECT_TRUE(b.clipped_right);
  EXPECT_FALSE(b.clipped_left);
}

TEST(Bands, MathieuFirstBand) {
  const double tol = 1e-10;
  const auto b = bands<double>(mathieu(), -1.0, 0.0, tol);
  ASSERT_EQ(b.bands.size(), 1u);
  EXPECT_NEAR(b.bands[0].first, -0.3785, 1e-3);
  EXPECT_NEAR(b.bands[0].second, -0.3477, 1e-3);
  ASSERT_EQ(b.band_ends.size(), 2u);
  for (double e : b.band_ends) {
    const double lo = detail::band_gap_function(mathieu(), e - 4 * tol, default_ode_step);
    const double hi = detail::band_gap_function(mathieu(), e + 4 * tol, default_ode_step);
    EXPECT_LT(lo * hi, 0.0) << e;
  }
}

TEST(Bands, SortedDisjointAndStable) {
  const auto b = bands<double>(mathieu(), -1.0, 6.0);
  ASSERT_GE(b.bands.size(), 3u);
  for (std::size_t i = 0; i < b.bands.size(); ++i) {
    EXPECT_LT(b.bands[i].first, b.bands[i].second);
    if (i > 0) EXPECT_LT(b.bands[i - 1].second, b.bands[i].first);
    const double mid = (b.bands[i].first + b.bands[i].second) / 2;
    EXPECT_LE(std::abs(monodromy(mathieu(), C(mid)).discriminant().real()), 2.0);
    if (i > 0) {
      const double gap = (b.bands[i - 1].second + b.bands[i].first) / 2;
      EXPECT_GT(std::abs(monodromy(mathieu(), C(gap)).discriminant().real()), 2.0);
    }
  }
  const auto fine = bands<double>(mathieu(), -1.0, 6.0, 1e-10, 2000, default_ode_step / 2);
  ASSERT_EQ(fine.band_ends.size(), b.band_ends.size());
  for (std::size_t i = 0; i < b.band_ends.size(); ++i) EXPECT_NEAR(fine.band_ends[i], b.band_ends[i], 1e-6);
  EXPECT_THROW(bands<double>(mathieu(), 1.0, 0.0), ArgumentError);
}

TEST(FloquetSolution, QuasiPeriodicity) {
  const auto m = mathieu();
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> xs(0, 6), re(-1, 4), im(0.05, 1);
  for (int i = 0; i < 20; ++i) {
    const double x0 = xs(rng);
    const C z(re(rng), im(rng));
    // propagate back from three cells out, the stable direction for the decaying solution
    auto st = floquet_solution(m, x0 + 3 * two_pi, z, FloquetSign::plus);
    const C far = unscaled_value(st);
    const C rho = floquet_data(m, z).rho_plus;
    Propagator<C> prop(m, z, default_ode_step);
    prop.advance(st, x0);
    const C base = unscaled_value(st);
    EXPECT_LT(std::abs(far - rho * rho * rho * base), 1e-9 * std::abs(base)) << z;
  }
}

TEST(FloquetSolution, OdeResidual) {
  const auto m = mathieu(3.0);  // q = 0 on [0, 3), sin from 3 on
  const double d = 1e-3;
  for (C z : {C(0.4, 0.3), C(-0.8, 0.05), C(2.5, -0.4)}) {
    for (double x : {1.0, 2.2, 5.0, 9.3, 20.1}) {
      for (auto sign : {FloquetSign::plus, FloquetSign::minus}) {
        const C fm = unscaled_value(floquet_solution(m, x - d, z, sign));
        const C f0 = unscaled_value(floquet_solution(m, x, z, sign));
        const C fp = unscaled_value(floquet_solution(m, x + d, z, sign));
        const C q = eval_potential(m, x);
        const C residual = (fp - 2.0 * f0 + fm) / (d * d) - (q - z) * f0;
        const double scale = std::abs(f0) * (1 + std::abs(q - z));
        EXPECT_LT(std::abs(residual), 1e-6 * scale) << "x = " << x << " z = " << z;
      }
    }
  }
}

TEST(FloquetSolution, FreeTailPlaneWave) {
  for (C z : {C(2, 0.5), C(-1.5, 0.2), C(7, 1)}) {
    const C at0 = unscaled_value(floquet_solution(free_periodic(), 0.0, z, FloquetSign::plus));
    for (double x : {0.5, 3.7, 12.0}) {
      const auto s = floquet_solution(free_periodic(), x, z, FloquetSign::plus);
      EXPECT_LT(std::abs(unscaled_value(s) / at0 - std::exp(I * principal_sqrt(z) * x)), 1e-9);
      EXPECT_LT(std::abs(unscaled_derivative(s) / unscaled_value(s) - I * principal_sqrt(z)), 1e-9);
    }
  }
}

TEST(SpZeros, FreeTailsHaveNone) {
  const Rect rect(-2, 4, 0.05, 0.95);
  EXPECT_TRUE(sp_zeros<double>(PotentialModel::free(), 1.0, 0.0, rect).empty());
  EXPECT_TRUE(sp_zeros<double>(free_periodic(), 1.0, 0.0, rect).empty());
  const double x0 = 0.7;
  const auto f = sp_function<double>(PotentialModel::free(), 1.0, x0);
  for (C l : random_points(50, 6, 5, -3, 3)) {
    if (std::abs(l.imag()) < 1e-3 || std::abs(l.imag() - 1) < 1e-3) continue;
    const C k1 = principal_sqrt(l), k2 = principal_sqrt(l - I);
    const C expected = -I * (k1 + k2) * std::exp(I * (k1 - k2) * x0);
    EXPECT_LT(std::abs(f.evaluate(l).first - expected), 1e-12 * std::abs(expected));
    EXPECT_GT(std::abs(expected), 0.0);
  }
  EXPECT_THROW(sp_function<double>(mathieu(), 1.0, 7.0), ArgumentError);
}

TEST(SpZeros, MathieuZerosAreIsolated) {
  const auto roots = sp_zeros<double>(mathieu(), 0.25, 0.0, Rect(0.6, 2.2, 0.05, 0.24));
  ASSERT_EQ(roots.size(), 2u);
  // each reported point is a simple zero of the function itself
  const auto f = sp_function<double>(mathieu(), 0.25, 0.0);
  for (const auto& r : roots.roots) {
    const auto [v, d] = f.evaluate(r.location);
    EXPECT_LT(std::abs(v / d), 1e-10);
    EXPECT_LT(r.residual, 1e-10);
    EXPECT_EQ(r.multiplicity, 1);
    for (const auto& s : roots.roots)
      if (&s != &r) EXPECT_GT(std::abs(s.location - r.location), 1e-4);
  }
}

TEST(EmbeddedResonances, FreeTailHasNone) {
  EXPECT_TRUE(embedded_resonances<double>(PotentialModel::free(), {1e-3, 5.0}, 1e-3).empty());
  EXPECT_THROW(embedded_resonances<double>(mathieu(), {-0.5, 0.0}, 1e-3), ArgumentError);
}

TEST(EmbeddedResonances, CompactBarrierMatchesSecularEquation) {
  const double R0 = 4.7;
  const PotentialModel m({Piece{0.0, R0, Constant{C(0, 1)}}}, ZeroTail{});
  const double tol = 1e-3;
  const auto mus = embedded_resonances<double>(m, {0.05, 6.0}, tol);
  ASSERT_EQ(mus.size(), 1u);
  // second-sheet root of the matching condition at R0, continued from above the axis
  C z(mus[0], 0.0);
  for (int it = 0; it < 50; ++it) {
    const C s = principal_sqrt(z - I), r = std::sqrt(z);
    const C c = std::cos(s * R0), sn = std::sin(s * R0);
    const C g = s * c - I * r * sn;
    const C gp = (c - s * R0 * sn) / (2.0 * s) - I * sn / (2.0 * r) - I * r * c * R0 / (2.0 * s);
    z -= g / gp;
  }
  EXPECT_NEAR(z.real(), mus[0], 1e-3);
  EXPECT_LT(std::abs(z.imag()), 1e-3);
  const auto s = decaying_solution(m, 0.0, C(mus[0]), Sheet::principal);
  EXPECT_LT(std::abs(detail::unscale(detail::boundary_form(m, s), s.log_scale)), tol);
}

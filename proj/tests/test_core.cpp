#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "specbar/core/complex.hpp"
#include "specbar/core/geometry.hpp"
#include "specbar/core/model_io.hpp"
#include "specbar/core/potential.hpp"

using namespace specbar;
using std::numbers::pi;

TEST(PrincipalSqrt, Examples) {
  EXPECT_EQ(principal_sqrt(cdouble(-1, 0)), cdouble(0, 1));
  const cdouble w = principal_sqrt(cdouble(0, 2));
  EXPECT_NEAR(w.real(), 1.0, 1e-15);
  EXPECT_NEAR(w.imag(), 1.0, 1e-15);
  EXPECT_EQ(principal_sqrt(cdouble(4, 0)), cdouble(2, 0));
  // lower side of the cut maps to the negative real axis of w
  const cdouble below = principal_sqrt(cdouble(4, -1e-12));
  EXPECT_LT(below.real(), 0.0);
  EXPECT_GE(below.imag(), 0.0);
}

TEST(PrincipalSqrt, SquaresBackWithNonnegativeImaginaryPart) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 10000; ++i) {
    const cdouble z(u(rng), u(rng));
    const cdouble w = principal_sqrt(z);
    EXPECT_LE(std::abs(w * w - z), 1e-14 * std::abs(z));
    EXPECT_GE(w.imag(), 0.0);
    EXPECT_LE(sheeted_sqrt(z, Sheet::second).imag(), 0.0);
  }
}

TEST(SheetedSqrt, Examples) {
  EXPECT_EQ(sheeted_sqrt(cdouble(4, 0), Sheet::second), cdouble(-2, 0));
  EXPECT_EQ(sheeted_sqrt(cdouble(-1, 0), Sheet::second), cdouble(0, -1));
  EXPECT_NEAR(std::abs(sheeted_sqrt(cdouble(0, 2), Sheet::principal) - cdouble(1, 1)), 0.0, 1e-15);
}

TEST(SheetedSqrt, JetDerivative) {
  const cdouble z(1.3, -0.4);
  const auto j = principal_sqrt(Jet<cdouble>::variable(z));
  EXPECT_NEAR(std::abs(j.d - 0.5 / principal_sqrt(z)), 0.0, 1e-15);
}

TEST(Potential, PiecewiseConstant) {
  PotentialModel m({{0.0, 2.0, Constant{{0, 1}}}}, ZeroTail{});
  EXPECT_EQ(eval_potential(m, 1.0), cdouble(0, 1));
  EXPECT_EQ(eval_potential(m, 2.5), cdouble(0, 0));
  EXPECT_THROW(eval_potential(m, -0.1), DomainError);
}

TEST(Potential, PeriodicTail) {
  PotentialModel m({}, PeriodicTail{2 * pi, 0.0, Sinusoid{1, 1, 0}});
  EXPECT_NEAR(eval_potential(m, pi / 2).real(), 1.0, 1e-15);
  EXPECT_NEAR(eval_potential(m, pi / 2 + 2 * pi).real(), 1.0, 1e-15);
}

TEST(Potential, PeriodicTailIsExactlyPeriodic) {
  PotentialModel m({{0.0, 1.5, Constant{{2, 0}}}}, PeriodicTail{2.5, 3.0, Sinusoid{0.7, 2.0, 0.3}});
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(3.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    // the reduced coordinates agree, so the values are bitwise identical
    if (m.reduce(x) == m.reduce(x + 2.5)) EXPECT_EQ(eval_potential(m, x), eval_potential(m, x + 2.5));
    else EXPECT_NEAR(std::abs(eval_potential(m, x) - eval_potential(m, x + 2.5)), 0.0, 1e-13);
  }
  // the gap between the last piece and X carries q = 0
  EXPECT_EQ(eval_potential(m, 2.0), cdouble(0, 0));
}

TEST(Potential, ValidationErrors) {
  EXPECT_THROW(PotentialModel({{0.5, 1.0, Constant{}}}, ZeroTail{}), ModelError);
  EXPECT_THROW(PotentialModel({{0.0, 1.0, Constant{}}, {1.5, 2.0, Constant{}}}, ZeroTail{}), ModelError);
  EXPECT_THROW(PotentialModel({}, PeriodicTail{0.0, 0.0, Sinusoid{}}), ModelError);
  EXPECT_THROW(PotentialModel({{0.0, 2.0, Constant{}}}, PeriodicTail{1.0, 1.0, Sinusoid{}}), ModelError);
  EXPECT_THROW(PotentialModel({}, PeriodicTail{1.0, 0.0, Constant{{0, 1}}}), ModelError);
  EXPECT_THROW(BarrierProblem(PotentialModel::free(), cdouble(0, 0), 1.0), ArgumentError);
}

TEST(ModelIo, ParsesDocumentedSchema) {
  const auto m = parse_model(R"({
    "pieces": [{"x_lo": 0, "x_hi": 4.7, "kind": "const", "params": [0, 1]}],
    "tail": {"kind": "zero"},
    "eta": [0.25, 0]
  })");
  ASSERT_EQ(m.pieces().size(), 1u);
  EXPECT_EQ(m.support_end(), 4.7);
  EXPECT_EQ(eval_potential(m, 1.0), cdouble(0, 1));
  EXPECT_EQ(m.eta(), cdouble(0.25, 0));

  const auto p = parse_model(R"({"tail": {"kind": "periodic", "period": 6.283185307179586, "X": 0,
                                          "expr": {"kind": "sin", "params": [1, 1, 0]}}})");
  EXPECT_TRUE(p.has_periodic_tail());
  const auto again = model_from_json(model_to_json(p));
  EXPECT_EQ(eval_potential(again, 1.234), eval_potential(p, 1.234));

  EXPECT_THROW(parse_model("{ not json"), ModelError);
  EXPECT_THROW(parse_model(R"({"pieces": [{"x_lo": 0, "x_hi": 1, "kind": "cubic", "params": [1]}]})"), ModelError);
}

TEST(Geometry, SubtractLeavesUncoveredParts) {
  const Rectangle<double> r(0, 4, 0, 4);
  const auto parts = subtract(r, {Rectangle<double>(1, 1e300, 1.9, 2.1)});
  double area = 0;
  for (const auto& p : parts) area += p.width() * p.height();
  EXPECT_NEAR(area, 16 - 3 * 0.2, 1e-12);
  for (const auto& p : parts) EXPECT_FALSE(p.contains({2.5, 2.0}));
}

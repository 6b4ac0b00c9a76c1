#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "siegel/families.hpp"
#include "siegel/radius.hpp"

using namespace siegel;

TEST(Radial, RationalDiverges) {
  const auto e = rho_radial(make_quadratic(), RotationNumber::rational(1, 2), {12});
  EXPECT_TRUE(e.diverging_to_minus_infinity);
  EXPECT_FALSE(e.converged);
}

TEST(Radial, GoldenConverges) {
  const auto f = make_quadratic();
  const auto e = rho_radial(f, RotationNumber::golden(), {12});
  EXPECT_TRUE(e.converged);
  EXPECT_FALSE(e.diverging_to_minus_infinity);
  EXPECT_TRUE(std::isfinite(e.rho_hat));
  EXPECT_LE(e.rho_hat, f.koebe_ceiling());
  EXPECT_EQ(e.samples.size(), 11u);
}

TEST(Radial, WorkerCountDoesNotChangeResult) {
  const auto a = rho_radial(make_exp(), RotationNumber::silver(), {10, default_degree, default_budget, 1});
  const auto b = rho_radial(make_exp(), RotationNumber::silver(), {10, default_degree, default_budget, 3});
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].value, b.samples[i].value);
}

TEST(Coefficient, AgreesWithRadial) {
  const auto f = make_quadratic();
  const auto c = rho_coefficient(f, RotationNumber::golden());
  const auto r = rho_radial(f, RotationNumber::golden(), {14});
  EXPECT_TRUE(c.converged);
  EXPECT_LE(std::abs(c.rho_hat - r.rho_hat), 0.05);
}

TEST(Coefficient, RationalBreaksDown) {
  EXPECT_THROW(rho_coefficient(make_quadratic(), RotationNumber::rational(1, 2)), DivisorBreakdown);
  EXPECT_TRUE(estimate_rho(make_quadratic(), RotationNumber::rational(1, 2)).minus_infinity);
}

TEST(Coefficient, UpperBoundAllFamilies) {
  for (const auto& f : family_catalog()) {
    const auto e = rho_coefficient(f, RotationNumber::golden());
    EXPECT_LE(e.rho_hat, f.koebe_ceiling() + 0.1) << f.id();
  }
}

TEST(Coefficient, SinReductionDoublesRho) {
  const auto g = RotationNumber::golden();
  const double a2 = 2 * g.value - std::floor(2 * g.value);
  const auto s = rho_coefficient(make_sin(), g);
  const auto r = rho_coefficient(symmetry_reduce(make_sin()), RotationNumber::from_float(a2));
  EXPECT_NEAR(r.rho_hat, 2 * s.rho_hat, 0.1);
}

TEST(Estimators, NearRationalDip) {
  const auto f = make_quadratic();
  const double golden = rho_coefficient(f, RotationNumber::golden()).rho_hat;
  for (int j = 3; j <= 5; ++j) {
    const auto a = RotationNumber::from_float(0.5 + std::pow(10.0, -j));
    const auto e = estimate_rho(f, a);
    EXPECT_TRUE(e.below(golden - 1)) << "j=" << j;
  }
}

TEST(Harmonic, Oracles) {
  const PolarGrid grid;
  const auto exact = sample_field(grid, [](std::complex<double> z) { return z.real(); }, 1);
  EXPECT_LE(harmonic_check(exact).max_deviation, 1e-12);
  const auto nonharm = sample_field(grid, [](std::complex<double> z) { return std::norm(z); }, 1);
  const double h = grid.step();
  EXPECT_NEAR(harmonic_check(nonharm).max_deviation, h * h, 1e-3 * h * h);
}

TEST(Harmonic, YoccozFieldIsHarmonic) {
  const PolarGrid grid;
  const YoccozEvaluator<double> eval(make_quadratic());
  const auto u = sample_field(grid, [&](std::complex<double> z) { return eval(z).u; }, 1);
  const auto rep = harmonic_check(u);
  EXPECT_EQ(rep.masked, 0);
  EXPECT_LE(rep.max_deviation, 1e-3);
}

TEST(Poisson, ArcMeasuresPartitionUnity) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 1);
  const StepBoundary step{0.3, 0.05, 1.0, 2.0, 3.0};
  for (int i = 0; i < 200; ++i) {
    const auto z = std::polar(0.999 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng));
    EXPECT_LE(step.partition_error(z), 1e-12);
  }
  EXPECT_NEAR(arc_harmonic_measure({0, 0}, 0, std::numbers::pi / 2), 0.25, 1e-15);
}

TEST(Poisson, ConstantDataIsCeiling) {
  const auto f = make_quadratic();
  const double m = f.koebe_ceiling();
  const StepBoundary step{0.3, 0.05, m, m, m};
  EXPECT_NEAR(step({0.2, 0.4}), m, 1e-12);
  const auto rep = poisson_bound_check(f, RotationNumber::golden().value, 0.05, m, m, 8);
  EXPECT_EQ(rep.violations, 0);
}

TEST(Poisson, GoldenWithFlankCaps) {
  const auto f = make_quadratic();
  const double a = RotationNumber::golden().value;
  const auto caps = flank_caps(f, a, 0.01, 16, 0.02);
  const auto rep = poisson_bound_check(f, a, 0.01, caps.left, caps.right, 12);
  EXPECT_EQ(rep.violations, 0);
  EXPECT_EQ(rep.unavailable, 0);
}

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "siegel/families.hpp"
#include "siegel/linearize.hpp"
#include "siegel/rotation.hpp"

using namespace siegel;

TEST(Koenigs, QuadraticLowOrder) {
  const auto ks = koenigs_series<double>(make_quadratic(), {0.5, 0}, 16);
  EXPECT_EQ(ks.h[0], std::complex<double>(0));
  EXPECT_EQ(ks.h[1], std::complex<double>(1));
  EXPECT_NEAR(std::abs(ks.h[2] - std::complex<double>(-2)), 0, 1e-14);
  EXPECT_NEAR(std::abs(ks.h[3] - std::complex<double>(8.0 / 3)), 0, 1e-14);
}

TEST(Koenigs, Preconditions) {
  EXPECT_THROW(koenigs_series<double>(make_quadratic(), {0, 0}), PreconditionError);
  EXPECT_THROW(koenigs_series<double>(make_quadratic(), {1, 0}), PreconditionError);
}

TEST(Koenigs, ResidualAllFamilies) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (const auto& f : family_catalog()) {
    for (int i = 0; i < 5; ++i) {
      const auto lam = std::polar(0.05 + 0.85 * u(rng), 2 * std::numbers::pi * u(rng));
      const auto ks = koenigs_series<double>(f, lam, 128);
      EXPECT_LE(koenigs_residual(ks).max_scaled, 1e-9) << f.id();
    }
  }
}

TEST(Koenigs, InverseIsIdentity) {
  const auto ks = koenigs_series<double>(make_exp(), {0.3, 0.4}, 64);
  const auto inv = revert(ks.h);
  EXPECT_LE(test::scaled_identity_error(inv, ks.h), 1e-9);
  EXPECT_LE(test::scaled_identity_error(ks.h, inv), 1e-9);
}

TEST(Koenigs, EvaluationFunctionalEquation) {
  const auto f = make_quadratic();
  const std::complex<double> lam(0.6, 0.3);
  const auto ks = koenigs_series<double>(f, lam);
  const KoenigsEvaluator<double> eval(ks);
  EXPECT_EQ(eval({0, 0}).iterations, 0);
  EXPECT_EQ(eval({0, 0}).value, std::complex<double>(0));
  const auto inside = eval({0.005, 0.001});
  EXPECT_EQ(inside.iterations, 0);
  EXPECT_LE(std::abs(inside.value - horner(ks.h, std::complex<double>(0.005, 0.001))), 1e-17);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 20; ++i) {
    const std::complex<double> z(u(rng), u(rng));
    const auto a = eval(z).value;
    const auto b = eval(family_eval<double>(f, lam, z)).value / lam;
    EXPECT_LE(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST(Koenigs, EscapeIsNoConvergence) {
  const KoenigsEvaluator<double> eval(koenigs_series<double>(make_quadratic(), {0.5, 0}));
  EXPECT_THROW(eval({3, 0}), NoConvergence);
}

TEST(Siegel, GoldenSeries) {
  const auto ss = siegel_series<double>(make_quadratic(), RotationNumber::golden().value, 64);
  EXPECT_TRUE(ss.g.all_finite());
  EXPECT_GT(ss.divisor_floor, 1e-3);
  EXPECT_LE(siegel_residual(ss).max_scaled, 1e-7);
}

TEST(Siegel, RationalBreaksDown) {
  try {
    siegel_series<double>(make_quadratic(), 0.5, 64);
    FAIL() << "expected breakdown";
  } catch (const DivisorBreakdown& e) {
    EXPECT_EQ(e.code(), "small_divisor_breakdown");
    EXPECT_EQ(e.k(), 3);
  }
}

TEST(Siegel, ExtendedPrecisionAgrees) {
  const double a = RotationNumber::golden().value;
  const auto d = siegel_series<double>(make_quadratic(), a, 48);
  const auto l = siegel_series<long double>(make_quadratic(), static_cast<long double>(a), 48);
  for (int k = 0; k <= 48; ++k)
    EXPECT_LE(std::abs(d.g[k] - std::complex<double>(l.g[k])), 1e-9 * std::max(1.0, std::abs(d.g[k])));
}

TEST(Yoccoz, SmallLambdaAsymptotic) {
  const auto y = yoccoz_w<double>(make_quadratic(), {0.01, 0});
  EXPECT_LE(std::abs(y.w / y.lambda - 0.25), 0.05);
  EXPECT_NEAR(y.u, std::log(0.25), 0.2);
}

TEST(Yoccoz, KoebeOnSamples) {
  const YoccozEvaluator<double> eval(make_quadratic());
  for (int i = 1; i <= 9; ++i)
    for (int j = 0; j < 12; ++j) {
      const auto y = eval(std::polar(0.1 * i, 2 * std::numbers::pi * j / 12));
      EXPECT_LT(std::abs(y.w), 1.0);
      EXPECT_TRUE(y.koebe_ok);
    }
}

TEST(Yoccoz, Preconditions) {
  EXPECT_THROW(yoccoz_w<double>(make_quadratic(), {0, 0}), PreconditionError);
  EXPECT_THROW(yoccoz_w<double>(make_quadratic(), {1.2, 0}), PreconditionError);
}

TEST(Yoccoz, VAsymptoticFit) {
  for (const auto& f : {make_quadratic(), make_exp(), make_zexp(), make_poly(3)}) {
    const auto v = fit_v_asymptotic(f);
    EXPECT_LE(std::abs(v - f.v) / std::abs(f.v), 0.01) << f.id();
  }
}

TEST(Yoccoz, SymmetryTransport) {
  // Koenigs series of sin at lambda and of its reduction at lambda^2:
  // G(omega) = g(omega^{1/2})^2.
  const int n = 128;
  const std::complex<double> lam(0.5, 0.3);
  const auto g = koenigs_series<double>(make_sin(), lam, n).h;
  const auto G = koenigs_series<double>(symmetry_reduce(make_sin()), lam * lam, n / 2).h;
  const auto sq = g * g;
  double worst = 0;
  for (int k = 0; k <= n / 2; ++k) worst = std::max(worst, std::abs(G[k] - sq[2 * k]));
  EXPECT_LE(worst, 1e-8);
}

TEST(EntryRadius, GridAndSelection) {
  const auto grid = entry_radius_grid();
  EXPECT_EQ(grid.front(), 0.2);
  EXPECT_TRUE(std::is_sorted(grid.rbegin(), grid.rend()));
  const auto ks = koenigs_series<double>(make_quadratic(), {0.5, 0});
  const double r = select_entry_radius(ks.h);
  EXPECT_LE(truncation_gap(ks.h, r), entry_consistency_tol);
}

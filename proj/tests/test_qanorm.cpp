#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "siegel/qanorm.hpp"

using namespace siegel;
using siegel::test::series_of;

namespace {

TruncatedSeries smooth_random(std::mt19937_64& rng, int degree) {
  // |c_k| <= 0.5^k: reliable well past r = 0.3
  auto s = test::random_series(rng, degree);
  double scale = 1;
  for (int k = 0; k <= degree; ++k, scale *= 0.5) s[k] *= scale;
  return s;
}

}  // namespace

TEST(QaNorm, HandValues) {
  EXPECT_EQ(qa_norm(TruncatedSeries(8), 0.5, 4).value, 0.0);
  // exact polynomials padded to the working degree pass the reliability test
  const auto w = qa_norm(TruncatedSeries::identity(default_degree), 0.5, 2);
  EXPECT_NEAR(w.value, 0.5, 1e-9);
  EXPECT_EQ(w.argmax_k, 0);
  EXPECT_NEAR(qa_norm(TruncatedSeries::monomial(default_degree, 2), 1.0, 2).value, 1.0, 1e-9);
  EXPECT_NEAR(qa_norm(TruncatedSeries::monomial(default_degree, 2), 1.0).value, 1.0, 1e-9);
  EXPECT_NEAR(qa_weight(1), 3 * std::log(3.0), 1e-15);
  EXPECT_EQ(qa_weight(0), 1.0);
}

TEST(QaNorm, Preconditions) {
  const auto g = series_of({0, 1, 0});
  EXPECT_THROW(qa_norm(g, 0.0), PreconditionError);
  EXPECT_THROW(qa_norm(g, 0.5, 3), PreconditionError);
  EXPECT_THROW(qa_norm(series_of({0, 0, 1}), 1.0, 2), UnreliableRadius);
  EXPECT_THROW(qa_norm(g, 0.5, 1, 32), PreconditionError);
  TruncatedSeries big(40);
  for (int k = 0; k <= 40; ++k) big[k] = std::pow(2.0, k);
  EXPECT_THROW(qa_norm(big, 0.9), UnreliableRadius);
}

TEST(QaNorm, Axioms) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 30; ++i) {
    const auto a = smooth_random(rng, 40), b = smooth_random(rng, 40), c = smooth_random(rng, 40);
    const double r = 0.3;
    const double na = qa_norm(a, r).value;
    EXPECT_NEAR(qa_norm(2.0 * a, r).value, 2 * na, 1e-12 * na);
    EXPECT_LE(qa_distance(a, c, r), qa_distance(a, b, r) + qa_distance(b, c, r) + 1e-12);
    EXPECT_EQ(qa_distance(a, a, r), 0.0);
    EXPECT_GT(na, 0.0);
    EXPECT_LE(qa_norm(a, 0.2).value, qa_norm(a, 0.3).value + 1e-12);
  }
}

TEST(QaNorm, SamplingStable) {
  std::mt19937_64 rng(19);
  const auto g = smooth_random(rng, 40);
  const double a = qa_norm(g, 0.3, 40, 512).value;
  const double b = qa_norm(g, 0.3, 40, 1024).value;
  EXPECT_LE(std::abs(a - b), 1e-3 * a);
}

TEST(QaNorm, PlateauInK) {
  // |c_k| <= 1 reliable on r = 0.5, measured at s = 0.4
  TruncatedSeries g(64);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 1; k <= 64; ++k) g[k] = std::polar(1.0, 3.14159 * u(rng));
  std::vector<double> vals;
  for (int K = 4; K <= 40; K += 4) vals.push_back(qa_norm(g, 0.4, K).value);
  for (std::size_t i = 1; i < vals.size(); ++i) EXPECT_GE(vals[i], vals[i - 1]);
  EXPECT_TRUE(std::isfinite(vals.back()));
  EXPECT_LE(vals.back() - vals[vals.size() - 3], 1e-9 * vals.back());
}

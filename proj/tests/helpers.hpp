#pragma once

#include <complex>
#include <initializer_list>
#include <random>
#include <vector>

#include "siegel/series.hpp"

namespace siegel::test {

inline TruncatedSeries series_of(std::initializer_list<double> c) {
  std::vector<std::complex<double>> v(c.begin(), c.end());
  return TruncatedSeries(std::move(v));
}

/// Normalized series z + c_2 z^2 + ... with |c_k| <= bound.
inline TruncatedSeries random_normalized(std::mt19937_64& rng, int degree, double bound = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TruncatedSeries s = TruncatedSeries::identity(degree);
  for (int k = 2; k <= degree; ++k) {
    std::complex<double> c{u(rng), u(rng)};
    s[k] = bound * c / std::max(1.0, std::abs(c));
  }
  return s;
}

inline TruncatedSeries random_series(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TruncatedSeries s(degree);
  for (int k = 0; k <= degree; ++k) s[k] = {u(rng), u(rng)};
  return s;
}

/// max_k |[a o b]_k - [id]_k| / max(1, [|a| o |b|]_k): composition error
/// relative to the size of the terms that produced it.
inline double scaled_identity_error(const TruncatedSeries& a, const TruncatedSeries& b) {
  const auto c = compose(a, b);
  const auto scale = compose(abs_coeffs(a), abs_coeffs(b));
  const auto id = TruncatedSeries::identity(c.degree());
  double worst = 0;
  for (int k = 0; k <= c.degree(); ++k)
    worst = std::max(worst, std::abs(c[k] - id[k]) / std::max(1.0, std::abs(scale.coeff(k))));
  return worst;
}

inline double scaled_diff(const TruncatedSeries& x, const TruncatedSeries& y, const TruncatedSeries& scale) {
  double worst = 0;
  for (int k = 0; k <= std::max(x.degree(), y.degree()); ++k)
    worst = std::max(worst, std::abs(x.coeff(k) - y.coeff(k)) / std::max(1.0, std::abs(scale.coeff(k))));
  return worst;
}

}  // namespace siegel::test

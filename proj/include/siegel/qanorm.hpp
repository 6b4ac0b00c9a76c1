#pragma once

// Quasi-analytic norms
//   ||g||_r = sup_{k >= 0, |w| < r} |g^{(k)}(w)| / [(k+2) ln(k+2)]^k
// on truncated series. The sup over the disc is taken on |w| = r (maximum
// principle) and the sup over k is truncated at K; argmax_k < K is the
// evidence that the truncation did not bind.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "siegel/error.hpp"
#include "siegel/series.hpp"

namespace siegel {

inline constexpr int default_norm_samples = 512;
/// Relative two-truncation discrepancy above which r is unreliable.
inline constexpr double norm_reliability_tol = 1e-8;

inline int default_norm_order(int degree) { return std::min(degree, 40); }

struct NormResult {
  double r = 0;
  int K = 0;
  double value = 0;
  int argmax_k = 0;
  std::complex<double> argmax_point;
};

/// [(k+2) ln(k+2)]^k, natural logarithm; equals 1 at k = 0.
inline double qa_weight(int k) {
  const double base = (k + 2) * std::log(k + 2.0);
  return std::pow(base, k);
}

/// Throws UnreliableRadius when the half- and full-order truncations of g
/// disagree on |w| = r by more than norm_reliability_tol relative to the
/// size of g there.
inline void require_reliable_radius(const TruncatedSeries& g, double r) {
  const double gap = truncation_gap(g, r);
  double size = 0;
  double rk = 1;
  for (int k = 0; k <= g.degree(); ++k) {
    size += std::abs(g[k]) * rk;
    rk *= r;
  }
  if (gap > norm_reliability_tol * std::max(size, 1e-300) && gap > 0)
    throw UnreliableRadius("series not reliable on |w| = r (two-truncation discrepancy)", r, gap);
}

namespace detail {

inline int check_norm_args(const TruncatedSeries& g, double r, int K, int circle_samples) {
  if (!(r > 0)) throw PreconditionError("qa_norm: radius must be positive");
  if (circle_samples < 64) throw PreconditionError("qa_norm: need at least 64 circle samples");
  if (!g.all_finite()) throw NonFiniteError("qa_norm: non-finite coefficient");
  if (K < 0) K = default_norm_order(g.degree());
  if (K > g.degree()) throw PreconditionError("qa_norm: derivative order K exceeds the series degree");
  return K;
}

inline NormResult unchecked_norm(const TruncatedSeries& g, double r, int K, int circle_samples) {

  std::vector<std::complex<double>> points(static_cast<std::size_t>(circle_samples));
  for (int j = 0; j < circle_samples; ++j)
    points[static_cast<std::size_t>(j)] = std::polar(r, 2 * std::numbers::pi * j / circle_samples);

  NormResult out;
  out.r = r;
  out.K = K;
  out.argmax_point = points[0];
  TruncatedSeries d = g;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) d = derivative(d, 1).series;
    const double w = qa_weight(k);
    for (int j = 0; j < circle_samples; ++j) {
      const double v = std::abs(horner(d, points[static_cast<std::size_t>(j)])) / w;
      // strict > keeps the smallest (k, j) on ties
      if (v > out.value) {
        out.value = v;
        out.argmax_k = k;
        out.argmax_point = points[static_cast<std::size_t>(j)];
      }
    }
  }
  return out;
}

}  // namespace detail

inline NormResult qa_norm(const TruncatedSeries& g, double r, int K = -1, int circle_samples = default_norm_samples) {
  K = detail::check_norm_args(g, r, K, circle_samples);
  require_reliable_radius(g, r);
  return detail::unchecked_norm(g, r, K, circle_samples);
}

/// Reliability is required of g1 and g2; their difference has cancelling
/// low-order terms and would fail the relative test spuriously.
inline double qa_distance(const TruncatedSeries& g1, const TruncatedSeries& g2, double r, int K = -1,
                          int circle_samples = default_norm_samples) {
  const auto diff = g1 - g2;
  K = detail::check_norm_args(diff, r, K, circle_samples);
  require_reliable_radius(g1, r);
  require_reliable_radius(g2, r);
  return detail::unchecked_norm(diff, r, K, circle_samples).value;
}

}  // namespace siegel

#pragma once

// Estimators for rho(alpha) = log of the conformal radius of the Siegel disc
// of f_lambda, lambda = e^{2 pi i alpha}, plus diagnostics for the harmonic
// function u(lambda) = log |w(lambda)/lambda| whose radial limits are rho.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "siegel/error.hpp"
#include "siegel/families.hpp"
#include "siegel/linearize.hpp"
#include "siegel/parallel.hpp"
#include "siegel/rotation.hpp"

namespace siegel {

enum class RadiusMethod { radial, coefficient };

inline std::string to_string(RadiusMethod m) { return m == RadiusMethod::radial ? "radial" : "coefficient"; }

/// Radial scan: consecutive samples within this are a plateau.
inline constexpr double radial_plateau_tol = 0.02;
/// Radial scan: a drop of at least this per halving of 1 - r, sustained over
/// the last three steps, is the log-linear collapse u ~ (1/q) log(1 - r)
/// seen at rational alpha = p/q.
inline constexpr double radial_divergence_drop = 0.1;
/// Root test: window max and median of log|g_k|/k must agree this well.
inline constexpr double coefficient_gate = 0.1;

struct RadiusSample {
  double parameter = 0;  // r for radial, k for coefficient
  double value = 0;      // u(r e^{2 pi i alpha}) or log|g_k|
  bool ok = true;
  std::string status = "ok";
  long iterations = 0;
};

struct RadiusEstimate {
  RotationNumber alpha;
  RadiusMethod method = RadiusMethod::radial;
  double rho_hat = 0;  // last reliable value; meaningless as a limit when diverging
  bool converged = false;
  bool diverging_to_minus_infinity = false;
  double koebe_ceiling = 0;  // M = log 4 + log |v|
  std::vector<RadiusSample> samples;
  // coefficient method only
  double window_max = 0;
  double window_median = 0;
  double divisor_floor = 0;
};

struct RadialOptions {
  int depth = 12;
  int degree = default_degree;
  long budget = default_budget;
  int workers = 1;
};

/// u at r_k = 1 - 2^{-k}, k = 2..depth.
template <std::floating_point Real = double>
RadiusEstimate rho_radial(const FamilySpec& family, const RotationNumber& alpha, const RadialOptions& opt = {}) {
  if (opt.depth < 4) throw PreconditionError("radial scan needs depth >= 4");
  const YoccozEvaluator<Real> eval(family, opt.degree, opt.budget);
  const auto n = static_cast<std::size_t>(opt.depth - 1);
  auto samples = parallel_map(n, opt.workers, [&](std::size_t i) {
    const int k = static_cast<int>(i) + 2;
    const Real r = Real(1) - std::ldexp(Real(1), -k);
    RadiusSample s;
    s.parameter = static_cast<double>(r);
    const auto lambda = r * detail::unit_power(static_cast<Real>(alpha.value), 1);
    try {
      const auto y = eval(lambda);
      s.value = static_cast<double>(y.u);
      s.iterations = y.iterations;
    } catch (const NoConvergence& e) {
      s.ok = false;
      s.status = "budget_exhausted";
      s.iterations = e.iterations();
    } catch (const PoleError&) {
      s.ok = false;
      s.status = "pole";
    }
    return s;
  });

  RadiusEstimate est;
  est.alpha = alpha;
  est.method = RadiusMethod::radial;
  est.koebe_ceiling = family.koebe_ceiling();
  std::vector<double> good;
  for (const auto& s : samples)
    if (s.ok) good.push_back(s.value);
  est.samples = std::move(samples);
  if (good.empty()) throw EstimateUnavailable("radial scan: every sample exhausted its budget");
  est.rho_hat = good.back();
  if (good.size() >= 4) {
    const auto m = good.size();
    est.diverging_to_minus_infinity = true;
    for (std::size_t i = m - 3; i < m; ++i)
      if (good[i - 1] - good[i] < radial_divergence_drop) est.diverging_to_minus_infinity = false;
  }
  if (!est.diverging_to_minus_infinity && good.size() >= 2)
    est.converged = std::abs(good.back() - good[good.size() - 2]) <= radial_plateau_tol;
  return est;
}

struct CoefficientOptions {
  int degree = default_degree;
};

/// Root test on the Siegel series: rho_hat is minus the least-squares growth
/// rate of log|g_k| over k in [N/2, N]. The window max/median of log|g_k|/k
/// gate the converged flag.
inline RadiusEstimate rho_coefficient(const FamilySpec& family, const RotationNumber& alpha,
                                      const CoefficientOptions& opt = {}) {
  const int n = opt.degree;
  if (n < 32) throw PreconditionError("coefficient estimator needs degree >= 32");
  const auto ss = siegel_series<double>(family, alpha.value, n);

  RadiusEstimate est;
  est.alpha = alpha;
  est.method = RadiusMethod::coefficient;
  est.koebe_ceiling = family.koebe_ceiling();
  est.divisor_floor = ss.divisor_floor;

  std::vector<double> ks, logs, ratios;
  for (int k = n / 2; k <= n; ++k) {
    const double a = std::abs(ss.g[k]);
    RadiusSample s;
    s.parameter = k;
    if (a == 0) {
      // symmetric families have identically zero coefficients
      s.ok = false;
      s.status = "zero";
      s.value = -std::numeric_limits<double>::infinity();
    } else if (!std::isfinite(a)) {
      s.ok = false;
      s.status = "overflow";
    } else {
      s.value = std::log(a);
      ks.push_back(k);
      logs.push_back(s.value);
      ratios.push_back(s.value / k);
    }
    est.samples.push_back(s);
  }
  if (ks.size() < 3) throw EstimateUnavailable("coefficient estimator: too few usable coefficients");

  const double mk = std::accumulate(ks.begin(), ks.end(), 0.0) / static_cast<double>(ks.size());
  const double ml = std::accumulate(logs.begin(), logs.end(), 0.0) / static_cast<double>(logs.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxy += (ks[i] - mk) * (logs[i] - ml);
    sxx += (ks[i] - mk) * (ks[i] - mk);
  }
  est.rho_hat = -sxy / sxx;

  est.window_max = *std::max_element(ratios.begin(), ratios.end());
  auto sorted = ratios;
  std::sort(sorted.begin(), sorted.end());
  const auto mid = sorted.size() / 2;
  est.window_median = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  est.converged = std::abs(est.window_max - est.window_median) <= coefficient_gate;
  return est;
}

/// rho as a comparable number: -inf is a flag, never a sentinel.
struct RhoValue {
  bool minus_infinity = false;
  double value = 0;

  bool below(double x) const { return minus_infinity || value < x; }
  double as_double() const { return minus_infinity ? -std::numeric_limits<double>::infinity() : value; }
};

struct EstimatorOptions {
  RadiusMethod method = RadiusMethod::coefficient;
  int degree = default_degree;
  int depth = 12;
  long budget = default_budget;
  int workers = 1;
};

/// rho_hat with breakdown at exact rationals (coefficient) or a diverging
/// radial scan reported as -infinity. EstimateUnavailable propagates.
inline RhoValue estimate_rho(const FamilySpec& family, const RotationNumber& alpha, const EstimatorOptions& opt = {}) {
  if (opt.method == RadiusMethod::coefficient) {
    try {
      return {false, rho_coefficient(family, alpha, {opt.degree}).rho_hat};
    } catch (const DivisorBreakdown&) {
      return {true, 0};
    }
  }
  const auto est = rho_radial(family, alpha, {opt.depth, opt.degree, opt.budget, opt.workers});
  if (est.diverging_to_minus_infinity) return {true, 0};
  return {false, est.rho_hat};
}

// --- harmonic diagnostics -------------------------------------------------

struct PolarGrid {
  double r_min = 0.1;
  double r_max = 0.8;
  int n_r = 64;
  int n_theta = 64;

  double step() const { return (r_max - r_min) / (n_r - 1); }
  double radius(int i) const { return r_min + step() * i; }
  double angle(int j) const { return 2 * std::numbers::pi * j / n_theta; }
  std::complex<double> node(int i, int j) const { return std::polar(radius(i), angle(j)); }
  std::size_t size() const { return static_cast<std::size_t>(n_r) * static_cast<std::size_t>(n_theta); }
};

/// A field sampled at every grid node plus the four points at distance one
/// grid step h along +-1 and +-i (the discrete circle). NaN marks a sample
/// that could not be computed.
struct SampledField {
  PolarGrid grid;
  std::vector<double> center;
  std::array<std::vector<double>, 4> circle;
};

inline std::array<std::complex<double>, 4> circle_offsets(double h) {
  return {std::complex<double>(h, 0), std::complex<double>(0, h), std::complex<double>(-h, 0),
          std::complex<double>(0, -h)};
}

/// Samples `u` (returning NaN on failure) at every node and its discrete circle.
template <class Fn>
SampledField sample_field(const PolarGrid& grid, Fn&& u, int workers = 1) {
  SampledField f;
  f.grid = grid;
  const auto offsets = circle_offsets(grid.step());
  auto values = parallel_map(grid.size(), workers, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / static_cast<std::size_t>(grid.n_theta));
    const int j = static_cast<int>(idx % static_cast<std::size_t>(grid.n_theta));
    const auto c = grid.node(i, j);
    std::array<double, 5> out{};
    out[0] = u(c);
    for (std::size_t s = 0; s < 4; ++s) out[s + 1] = u(c + offsets[s]);
    return out;
  });
  f.center.resize(grid.size());
  for (auto& v : f.circle) v.resize(grid.size());
  for (std::size_t idx = 0; idx < values.size(); ++idx) {
    f.center[idx] = values[idx][0];
    for (std::size_t s = 0; s < 4; ++s) f.circle[s][idx] = values[idx][s + 1];
  }
  return f;
}

struct HarmonicReport {
  double max_deviation = 0;
  double mean_deviation = 0;
  int evaluated = 0;
  int masked = 0;
  std::complex<double> worst_node;
};

/// Mean-value defect |u(c) - mean of u on the discrete circle| over interior
/// rings (the first and last radius are excluded).
inline HarmonicReport harmonic_check(const SampledField& field) {
  const auto& g = field.grid;
  if (g.n_r < 3 || g.n_theta < 1) throw PreconditionError("harmonic_check: grid needs at least three rings");
  HarmonicReport rep;
  double total = 0;
  for (int i = 1; i < g.n_r - 1; ++i) {
    for (int j = 0; j < g.n_theta; ++j) {
      const auto idx = static_cast<std::size_t>(i) * static_cast<std::size_t>(g.n_theta) + static_cast<std::size_t>(j);
      double sum = 0;
      bool ok = std::isfinite(field.center[idx]);
      for (const auto& ring : field.circle) {
        ok = ok && std::isfinite(ring[idx]);
        sum += ring[idx];
      }
      if (!ok) {
        ++rep.masked;
        continue;
      }
      const double dev = std::abs(field.center[idx] - sum / 4);
      ++rep.evaluated;
      total += dev;
      if (dev > rep.max_deviation) {
        rep.max_deviation = dev;
        rep.worst_node = g.node(i, j);
      }
    }
  }
  if (rep.evaluated > 0) rep.mean_deviation = total / rep.evaluated;
  return rep;
}

/// Harmonic measure at z (|z| < 1) of the counterclockwise arc from angle
/// t1 to angle t2 (0 < t2 - t1 < 2 pi):  (angle subtended at z)/pi - (t2 - t1)/(2 pi).
inline double arc_harmonic_measure(std::complex<double> z, double t1, double t2) {
  const auto a = std::polar(1.0, t1);
  const auto b = std::polar(1.0, t2);
  double seen = std::arg((b - z) / (a - z));
  if (seen < 0) seen += 2 * std::numbers::pi;
  return seen / std::numbers::pi - (t2 - t1) / (2 * std::numbers::pi);
}

/// Poisson integral of step boundary data around e^{2 pi i alpha}:
/// `left` on (alpha - delta, alpha), `right` on (alpha, alpha + delta),
/// `outside` on the rest of the circle.
struct StepBoundary {
  double alpha = 0;
  double delta = 0;
  double left = 0;
  double right = 0;
  double outside = 0;

  std::array<double, 3> measures(std::complex<double> z) const {
    const double tau = 2 * std::numbers::pi;
    const double a = tau * alpha;
    const double d = tau * delta;
    return {arc_harmonic_measure(z, a - d, a), arc_harmonic_measure(z, a, a + d),
            arc_harmonic_measure(z, a + d, a - d + tau)};
  }

  double operator()(std::complex<double> z) const {
    const auto m = measures(z);
    return left * m[0] + right * m[1] + outside * m[2];
  }

  double partition_error(std::complex<double> z) const {
    const auto m = measures(z);
    return std::abs(m[0] + m[1] + m[2] - 1);
  }

  /// Boundary limit along the ray to e^{2 pi i alpha}.
  double ray_limit() const { return 0.5 * (left + right); }
};

struct PoissonSample {
  double r = 0;
  double u = 0;
  double u_eps = 0;
  double margin = 0;  // u_eps - u
  bool ok = true;
  std::string status = "ok";
};

struct PoissonReport {
  double alpha = 0;
  double delta = 0;
  double left = 0;
  double right = 0;
  double ceiling = 0;      // M
  double limit_value = 0;  // (L + R)/2
  std::vector<PoissonSample> samples;
  int violations = 0;
  int unavailable = 0;
  double min_margin = std::numeric_limits<double>::infinity();
};

struct PoissonOptions {
  int degree = default_degree;
  long budget = default_budget;
  int workers = 1;
};

/// Checks u(r e^{2 pi i alpha}) <= u_eps at r_j = 1 - 2^{-j}, j = 1..ray_samples,
/// where u_eps has boundary data L, R on the flanks and M elsewhere.
/// Violations are findings: they mean the caps L, R were not valid.
inline PoissonReport poisson_bound_check(const FamilySpec& family, double alpha, double delta, double left,
                                         double right, int ray_samples, const PoissonOptions& opt = {}) {
  if (!(delta > 0) || delta >= 0.5) throw PreconditionError("poisson check: delta must be in (0, 1/2)");
  if (ray_samples < 1) throw PreconditionError("poisson check: need at least one ray sample");
  PoissonReport rep;
  rep.alpha = alpha;
  rep.delta = delta;
  rep.left = left;
  rep.right = right;
  rep.ceiling = family.koebe_ceiling();
  const StepBoundary step{alpha, delta, left, right, rep.ceiling};
  rep.limit_value = step.ray_limit();

  const YoccozEvaluator<double> eval(family, opt.degree, opt.budget);
  const auto dir = detail::unit_power(alpha, 1);
  rep.samples = parallel_map(static_cast<std::size_t>(ray_samples), opt.workers, [&](std::size_t i) {
    PoissonSample s;
    s.r = 1 - std::ldexp(1.0, -static_cast<int>(i + 1));
    const auto z = s.r * dir;
    s.u_eps = step(z);
    try {
      s.u = eval(z).u;
      s.margin = s.u_eps - s.u;
    } catch (const NoConvergence&) {
      s.ok = false;
      s.status = "budget_exhausted";
    }
    return s;
  });
  for (const auto& s : rep.samples) {
    if (!s.ok) {
      ++rep.unavailable;
      continue;
    }
    rep.min_margin = std::min(rep.min_margin, s.margin);
    if (s.margin < 0) ++rep.violations;
  }
  return rep;
}

struct FlankCaps {
  double left = -std::numeric_limits<double>::infinity();
  double right = -std::numeric_limits<double>::infinity();
  int minus_infinity = 0;
  int unavailable = 0;
};

/// Largest rho_hat over `per_flank` equispaced samples on each of
/// (alpha - delta, alpha) and (alpha, alpha + delta), plus `slack`.
inline FlankCaps flank_caps(const FamilySpec& family, double alpha, double delta, int per_flank, double slack,
                            const EstimatorOptions& opt = {}) {
  FlankCaps caps;
  for (int side = 0; side < 2; ++side) {
    double& cap = side == 0 ? caps.left : caps.right;
    for (int j = 1; j <= per_flank; ++j) {
      const double beta = alpha + (side == 0 ? -1 : 1) * delta * j / (per_flank + 1.0);
      try {
        const auto r = estimate_rho(family, RotationNumber::from_float(beta), opt);
        if (r.minus_infinity) {
          ++caps.minus_infinity;
          continue;
        }
        cap = std::max(cap, r.value);
      } catch (const EstimateUnavailable&) {
        ++caps.unavailable;
      }
    }
    cap += slack;
  }
  return caps;
}

}  // namespace siegel

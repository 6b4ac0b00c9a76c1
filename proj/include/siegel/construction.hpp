#pragma once

// Finite-depth version of the nested-interval construction of a rotation
// number alpha_inf with prescribed rho(alpha_inf) = rho_inf whose Siegel
// linearizations g_{alpha_n} form a Cauchy sequence in the quasi-analytic
// norm on |w| <= r_inf = e^{rho_inf}.
//
// Each step picks alpha_{n+1} in (alpha_n - eps_n, alpha_n + eps_n) with
// rho_hat(alpha_{n+1}) ~ rho_{n+1}, bisecting between a convergent of
// alpha_n (rho = -inf) and alpha_n itself, accepts it when
// ||g_{alpha_n} - g_{alpha_{n+1}}||_{r_inf} <= 2^{-n} delta, then shrinks
// eps_{n+1} until a flank scan sees rho_hat < rho_n on the closed interval.
// The output is a certificate for depth D only.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "siegel/error.hpp"
#include "siegel/families.hpp"
#include "siegel/linearize.hpp"
#include "siegel/qanorm.hpp"
#include "siegel/radius.hpp"
#include "siegel/rotation.hpp"

namespace siegel {

// --- boundary curves ------------------------------------------------------

struct BoundaryPoint {
  double theta = 0;
  std::complex<double> z;
  double abs_gprime = 0;
};

struct BoundaryReport {
  double radius = 0;
  std::vector<BoundaryPoint> curve;  // samples + 1 points, theta from 0 to 2 pi inclusive
  double gprime_min_circle = 0;
  double gprime_max_circle = 0;
  double gprime_min_disc = 0;  // over the closed disc (interior mesh and circle)
  double gprime_max_disc = 0;
  int self_intersections = 0;
};

namespace detail {

inline double orient(std::complex<double> a, std::complex<double> b, std::complex<double> c) {
  return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

inline bool segments_cross(std::complex<double> p1, std::complex<double> p2, std::complex<double> q1,
                           std::complex<double> q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Proper crossings between non-adjacent edges of a closed polygon.
inline int count_self_intersections(const std::vector<BoundaryPoint>& curve) {
  const auto m = curve.size() - 1;  // last point repeats the first
  int count = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (segments_cross(curve[i].z, curve[i + 1].z, curve[j].z, curve[j + 1].z)) ++count;
    }
  return count;
}

}  // namespace detail

/// Image of |w| = e^rho under g plus |g'| statistics on the circle and on a
/// polar mesh of the closed disc.
inline BoundaryReport boundary_from_series(const TruncatedSeries& g, double rho, int samples, int disc_rings = 16) {
  if (samples < 3) throw PreconditionError("boundary: need at least three samples");
  const double radius = std::exp(rho);
  require_reliable_radius(g, radius);
  const auto dg = derivative(g, 1).series;

  BoundaryReport rep;
  rep.radius = radius;
  rep.gprime_min_circle = std::numeric_limits<double>::infinity();
  rep.gprime_max_circle = 0;
  for (int j = 0; j <= samples; ++j) {
    const double theta = 2 * std::numbers::pi * j / samples;
    const auto w = std::polar(radius, theta);
    BoundaryPoint p{theta, horner(g, w), std::abs(horner(dg, w))};
    rep.gprime_min_circle = std::min(rep.gprime_min_circle, p.abs_gprime);
    rep.gprime_max_circle = std::max(rep.gprime_max_circle, p.abs_gprime);
    rep.curve.push_back(p);
  }
  rep.gprime_min_disc = rep.gprime_min_circle;
  rep.gprime_max_disc = rep.gprime_max_circle;
  for (int i = 0; i < disc_rings; ++i) {
    const double rr = radius * i / disc_rings;
    const int nt = i == 0 ? 1 : samples;
    for (int j = 0; j < nt; ++j) {
      const double a = std::abs(horner(dg, std::polar(rr, 2 * std::numbers::pi * j / samples)));
      rep.gprime_min_disc = std::min(rep.gprime_min_disc, a);
      rep.gprime_max_disc = std::max(rep.gprime_max_disc, a);
    }
  }
  rep.self_intersections = detail::count_self_intersections(rep.curve);
  return rep;
}

/// Curves close to the disc edge need long series to pass the reliability test.
inline constexpr int boundary_degree = 512;

inline BoundaryReport boundary_report(const FamilySpec& family, const RotationNumber& alpha, double rho, int samples,
                                      int degree = boundary_degree) {
  const auto ss = siegel_series<double>(family, alpha.value, degree);
  return boundary_from_series(ss.g, rho, samples);
}

// --- intermediate-value search --------------------------------------------

using RhoFunction = std::function<RhoValue(const RotationNumber&)>;

struct LocatedAlpha {
  RotationNumber alpha;
  RhoValue rho;
  int evaluations = 0;
};

inline constexpr int bisection_max_iterations = 64;
inline constexpr int midpoint_retries = 8;

/// Bisects between brackets with rho_hat(lo) < target < rho_hat(hi) until
/// |rho_hat - target| <= tol. Either numeric order of lo, hi is accepted.
inline LocatedAlpha find_alpha_with_rho(const RhoFunction& rho, double target, const RotationNumber& lo,
                                        const RotationNumber& hi, double tol) {
  LocatedAlpha out;
  auto eval = [&](const RotationNumber& a) {
    ++out.evaluations;
    return rho(a);
  };
  auto hit = [&](const RhoValue& v) { return !v.minus_infinity && std::abs(v.value - target) <= tol; };

  RhoValue r_lo, r_hi;
  try {
    r_hi = eval(hi);
    if (hit(r_hi)) return {hi, r_hi, out.evaluations};
    r_lo = eval(lo);
    if (hit(r_lo)) return {lo, r_lo, out.evaluations};
  } catch (const EstimateUnavailable& e) {
    throw BracketFailure(std::string("bracket end has no estimate: ") + e.what());
  }
  if (!(r_lo.below(target) && !r_hi.below(target)))
    throw PreconditionError("find_alpha_with_rho: brackets do not straddle the target");

  double a = lo.value;  // rho below target
  double b = hi.value;  // rho above target
  for (int it = 0; it < bisection_max_iterations; ++it) {
    double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    std::optional<RhoValue> r;
    for (int retry = 0; retry <= midpoint_retries && !r; ++retry) {
      const double x = retry == 0 ? mid : mid + (b - a) * 0.01 * retry * (retry % 2 ? 1 : -1);
      try {
        r = eval(RotationNumber::from_float(x));
        mid = x;
      } catch (const EstimateUnavailable&) {
      }
    }
    if (!r) throw BracketFailure("estimator unavailable at a midpoint after retries");
    if (hit(*r)) return {RotationNumber::from_float(mid), *r, out.evaluations};
    if (r->below(target))
      a = mid;
    else
      b = mid;
  }
  throw BracketFailure("bisection did not reach the target tolerance (rho_hat discontinuous in the bracket?)");
}

inline LocatedAlpha find_alpha_with_rho(const FamilySpec& family, double target, const RotationNumber& lo,
                                        const RotationNumber& hi, double tol, const EstimatorOptions& opt = {}) {
  return find_alpha_with_rho([&](const RotationNumber& a) { return estimate_rho(family, a, opt); }, target, lo, hi,
                             tol);
}

// --- the construction -----------------------------------------------------

struct ConstructionConfig {
  FamilySpec family = make_quadratic();
  RotationNumber alpha0 = RotationNumber::golden();
  double eps0 = 0.01;
  double rho_inf = 0;
  int depth = 3;
  double delta = 0.1;
  std::vector<double> rho_schedule;  // rho_1 > ... > rho_D > rho_inf; empty means auto_schedule
  EstimatorOptions estimator{};
  double tol_rho = 0.02;
  int retry_budget = 8;
  int flank_samples = 16;
  int flank_shrinks = 8;
  int norm_order = -1;  // K; -1 means min(N, 40)
  int norm_samples = default_norm_samples;
  bool radial_crosscheck = true;
  int crosscheck_depth = 12;
  int boundary_samples = 256;
};

/// rho_n = rho_inf + (rho0 - rho_inf) 2^{-n}, n = 1..depth.
inline std::vector<double> auto_schedule(double rho0, double rho_inf, int depth) {
  std::vector<double> s;
  for (int n = 1; n <= depth; ++n) s.push_back(rho_inf + (rho0 - rho_inf) * std::ldexp(1.0, -n));
  return s;
}

struct ConstructionStep {
  int n = 0;  // produces alpha_{n+1}
  double alpha = 0;
  double eps = 0;
  double rho_target = 0;
  double rho_achieved = 0;
  double rho_ceiling = 0;  // flank bound rho_n
  double norm_delta = 0;
  double norm_bound = 0;  // 2^{-n} delta
  double interval_lo = 0;
  double interval_hi = 0;
  Convergent lo_bracket;
  int candidates_tried = 0;
  int eps_shrinks = 0;
  int estimator_calls = 0;
  std::optional<double> radial_rho;  // cross-check, informational
  bool radial_converged = false;
  bool radial_diverging = false;
};

struct ConstructionReport {
  std::string label = "finite-depth certificate";
  std::string family;
  double alpha0 = 0;
  double rho0 = 0;
  double eps0 = 0;
  double rho_inf = 0;
  double r_inf = 0;
  double delta = 0;
  double tol_rho = 0;
  std::vector<double> schedule;
  std::vector<ConstructionStep> steps;
  double alpha_final = 0;
  double rho_final = 0;
  bool completed = false;
  std::string stall_reason;
  bool nested_ok = true;
  bool norm_deltas_ok = true;
  double final_distance = 0;  // ||g_{alpha_D} - g_{alpha_0}||
  std::vector<std::vector<double>> pairwise_distances;
  bool cauchy_ok = false;
  std::vector<BoundaryPoint> boundary;
  double gprime_min = 0;
  double gprime_max = 0;
  int self_intersections = 0;
};

class ConstructionStalled : public Error {
 public:
  ConstructionStalled(const std::string& message, ConstructionReport partial)
      : Error(ErrorKind::numerical, "construction_stalled", message), partial_(std::move(partial)) {}

  const ConstructionReport& partial() const noexcept { return partial_; }

 private:
  ConstructionReport partial_;
};

namespace detail {

// rho_hat memoized by the exact bits of alpha; keeps bisection reruns cheap
// and makes repeated evaluations agree.
class RhoMemo {
 public:
  RhoMemo(FamilySpec family, EstimatorOptions opt) : family_(std::move(family)), opt_(opt) {}

  RhoValue operator()(const RotationNumber& a) {
    const auto key = std::bit_cast<std::uint64_t>(a.value);
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
    const auto v = estimate_rho(family_, a, opt_);
    cache_.emplace(key, v);
    ++calls_;
    return v;
  }

  int calls() const noexcept { return calls_; }

 private:
  FamilySpec family_;
  EstimatorOptions opt_;
  std::map<std::uint64_t, RhoValue> cache_;
  int calls_ = 0;
};

}  // namespace detail

inline ConstructionReport run_construction(const ConstructionConfig& cfg) {
  if (cfg.depth < 0) throw PreconditionError("construction: depth must be >= 0");
  if (!(cfg.eps0 > 0)) throw PreconditionError("construction: eps0 must be positive");
  if (!(cfg.delta > 0)) throw PreconditionError("construction: delta must be positive");
  if (!(cfg.tol_rho > 0)) throw PreconditionError("construction: tol_rho must be positive");

  const int degree = cfg.estimator.degree;
  const int K = cfg.norm_order < 0 ? default_norm_order(degree) : cfg.norm_order;
  detail::RhoMemo rho(cfg.family, cfg.estimator);

  ConstructionReport rep;
  rep.family = cfg.family.id();
  rep.alpha0 = cfg.alpha0.value;
  rep.eps0 = cfg.eps0;
  rep.rho_inf = cfg.rho_inf;
  rep.r_inf = std::exp(cfg.rho_inf);
  rep.delta = cfg.delta;
  rep.tol_rho = cfg.tol_rho;

  const auto rho0 = rho(cfg.alpha0);
  if (rho0.minus_infinity) throw PreconditionError("construction: rho_hat(alpha0) is -infinity");
  rep.rho0 = rho0.value;
  if (!(cfg.rho_inf < rho0.value)) throw PreconditionError("construction: rho_inf must lie below rho_hat(alpha0)");

  rep.schedule = cfg.rho_schedule.empty() ? auto_schedule(rho0.value, cfg.rho_inf, cfg.depth) : cfg.rho_schedule;
  if (static_cast<int>(rep.schedule.size()) < cfg.depth)
    throw PreconditionError("construction: schedule shorter than depth");
  rep.schedule.resize(static_cast<std::size_t>(cfg.depth));
  for (std::size_t i = 0; i < rep.schedule.size(); ++i) {
    if (!(rep.schedule[i] > cfg.rho_inf)) throw PreconditionError("construction: schedule must stay above rho_inf");
    if (i > 0 && !(rep.schedule[i] < rep.schedule[i - 1]))
      throw PreconditionError("construction: schedule must be strictly decreasing");
  }
  if (cfg.depth > 0 && !(rho0.value > rep.schedule[0]))
    throw PreconditionError("construction: rho_hat(alpha0) must exceed rho_1");

  const double r_inf = rep.r_inf;
  std::vector<TruncatedSeries> gs{siegel_series<double>(cfg.family, cfg.alpha0.value, degree).g};
  std::vector<RotationNumber> alphas{cfg.alpha0};
  std::vector<std::pair<double, double>> intervals{{cfg.alpha0.value - cfg.eps0, cfg.alpha0.value + cfg.eps0}};
  std::vector<int> budget_used(static_cast<std::size_t>(cfg.depth), 0);
  std::string stall_reason;
  std::vector<ConstructionStep> deepest;

  // Epsilon for a located alpha: nest in the parent interval, then halve
  // until the flank scan stays below the ceiling. Returns 0 on failure.
  auto shrink_eps = [&](double a, double lo, double hi, double ceiling, int& shrinks) {
    double eps = std::min(a - lo, hi - a);
    for (shrinks = 0; shrinks <= cfg.flank_shrinks; ++shrinks, eps *= 0.5) {
      bool ok = true;
      for (int side = -1; side <= 1 && ok; side += 2)
        for (int j = 1; j <= cfg.flank_samples && ok; ++j) {
          const double x = a + side * eps * j / cfg.flank_samples;
          try {
            ok = rho(RotationNumber::from_float(x)).below(ceiling);
          } catch (const EstimateUnavailable&) {
            ok = false;
          }
        }
      if (ok) return eps;
    }
    return 0.0;
  };

  // Depth-first over candidates: a stall at step n + 1 sends the search back
  // to the next candidate of step n, within each step's retry budget.
  std::function<bool(int)> advance = [&](int n) -> bool {
    if (n == cfg.depth) return true;
    const auto idx = static_cast<std::size_t>(n);
    const double target = rep.schedule[idx];
    const double ceiling = n == 0 ? rho0.value : rep.schedule[idx - 1];
    const double bound = std::ldexp(cfg.delta, -n);
    const RotationNumber alpha_n = alphas.back();
    const auto [lo_n, hi_n] = intervals.back();

    // lo brackets: convergents the estimator can resolve, farthest first
    std::vector<Convergent> brackets;
    for (const auto& c : convergents(alpha_n, degree - 1)) {
      const double x = c.value();
      if (x != alpha_n.value && x > lo_n && x < hi_n) brackets.push_back(c);
    }
    std::sort(brackets.begin(), brackets.end(), [&](const Convergent& a, const Convergent& b) {
      return std::abs(a.value() - alpha_n.value) > std::abs(b.value() - alpha_n.value);
    });
    auto fail = [&](const std::string& why) {
      if (rep.steps.size() >= deepest.size()) {
        deepest = rep.steps;
        stall_reason = "step " + std::to_string(n) + ": " + why;
      }
      return false;
    };
    if (brackets.empty()) return fail("no convergent of alpha_n inside the current interval");

    std::string last_reason = "retry budget exhausted";
    for (const auto& c : brackets) {
      if (budget_used[idx] >= cfg.retry_budget) break;
      ++budget_used[idx];
      ConstructionStep step;
      step.n = n;
      step.rho_target = target;
      step.rho_ceiling = ceiling;
      step.norm_bound = bound;
      step.lo_bracket = c;
      step.candidates_tried = budget_used[idx];
      const int calls_before = rho.calls();

      LocatedAlpha found;
      try {
        found = find_alpha_with_rho(std::ref(rho), target, RotationNumber::rational(c.p, c.q), alpha_n, cfg.tol_rho);
      } catch (const PreconditionError& e) {
        last_reason = e.what();
        continue;
      } catch (const BracketFailure& e) {
        last_reason = e.what();
        continue;
      }
      const double a_next = found.alpha.value;
      if (!(a_next > lo_n && a_next < hi_n) || found.rho.minus_infinity) {
        last_reason = "located alpha left the interval";
        continue;
      }
      TruncatedSeries g = siegel_series<double>(cfg.family, a_next, degree).g;
      try {
        step.norm_delta = qa_distance(gs.back(), g, r_inf, K, cfg.norm_samples);
      } catch (const UnreliableRadius& e) {
        last_reason = e.what();
        continue;
      }
      if (step.norm_delta > bound) {
        last_reason = "norm condition failed (distance " + std::to_string(step.norm_delta) + ")";
        continue;
      }
      const double eps = shrink_eps(a_next, lo_n, hi_n, ceiling, step.eps_shrinks);
      step.estimator_calls = rho.calls() - calls_before;
      if (eps == 0.0) {
        last_reason = "flank scan never fell below rho_n";
        continue;
      }
      step.alpha = a_next;
      step.rho_achieved = found.rho.value;
      step.eps = eps;
      step.interval_lo = a_next - eps;
      step.interval_hi = a_next + eps;

      rep.steps.push_back(step);
      gs.push_back(std::move(g));
      alphas.push_back(found.alpha);
      intervals.emplace_back(step.interval_lo, step.interval_hi);
      if (advance(n + 1)) return true;
      rep.steps.pop_back();
      gs.pop_back();
      alphas.pop_back();
      intervals.pop_back();
      last_reason = "later steps stalled";
    }
    return fail("candidate search exhausted: " + last_reason);
  };

  if (!advance(0)) {
    rep.steps = deepest;
    rep.completed = false;
    rep.stall_reason = stall_reason;
    throw ConstructionStalled(stall_reason, rep);
  }

  for (std::size_t i = 0; i < rep.steps.size(); ++i) {
    auto& step = rep.steps[i];
    if (!(step.interval_lo >= intervals[i].first && step.interval_hi <= intervals[i].second)) rep.nested_ok = false;
    if (step.norm_delta > step.norm_bound) rep.norm_deltas_ok = false;
    if (cfg.radial_crosscheck) {
      try {
        const auto est = rho_radial(cfg.family, alphas[i + 1],
                                    {cfg.crosscheck_depth, degree, cfg.estimator.budget, cfg.estimator.workers});
        step.radial_rho = est.rho_hat;
        step.radial_converged = est.converged;
        step.radial_diverging = est.diverging_to_minus_infinity;
      } catch (const EstimateUnavailable&) {
      }
    }
  }

  const auto& alpha_n = alphas.back();
  rep.alpha_final = alpha_n.value;
  rep.rho_final = cfg.depth == 0 ? rho0.value : rep.steps.back().rho_achieved;

  rep.pairwise_distances.assign(gs.size(), std::vector<double>(gs.size(), 0.0));
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = i + 1; j < gs.size(); ++j) {
      const double d = qa_distance(gs[i], gs[j], r_inf, K, cfg.norm_samples);
      rep.pairwise_distances[i][j] = rep.pairwise_distances[j][i] = d;
      if (d > std::ldexp(cfg.delta, 1 - static_cast<int>(i))) rep.norm_deltas_ok = false;
    }
  rep.final_distance = rep.pairwise_distances.front().back();
  rep.cauchy_ok = rep.norm_deltas_ok && rep.final_distance <= 2 * cfg.delta;

  const auto boundary = boundary_from_series(gs.back(), cfg.rho_inf, cfg.boundary_samples);
  rep.boundary = boundary.curve;
  rep.gprime_min = boundary.gprime_min_disc;
  rep.gprime_max = boundary.gprime_max_disc;
  rep.self_intersections = boundary.self_intersections;
  rep.completed = true;
  return rep;
}

}  // namespace siegel

#pragma once

// Linearizing coordinates at the fixed point 0 of f_lambda = lambda f.
//
//   attracting, 0 < |lambda| < 1:  h(f_lambda(z)) = lambda h(z)   (Koenigs)
//   indifferent, lambda = e^{2 pi i alpha}:  f_lambda(g(w)) = g(lambda w)
//
// and the Yoccoz function w(lambda) = h_lambda(lambda v) with its harmonic
// log-modulus u(lambda) = log |w(lambda) / lambda|.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "siegel/error.hpp"
#include "siegel/families.hpp"
#include "siegel/series.hpp"

namespace siegel {

inline constexpr double koenigs_divisor_guard = 1e-14;
inline constexpr double siegel_divisor_guard = 1e-13;
inline constexpr double entry_consistency_tol = 1e-13;
inline constexpr long default_budget = 1'000'000;

/// Candidate entry radii, largest first. The first five are the standard
/// grid; the halvings below 0.01 only come into play close to rational
/// rotation numbers, where the convergence radius of h collapses.
inline std::vector<double> entry_radius_grid() {
  std::vector<double> grid{0.2, 0.1, 0.05, 0.02, 0.01};
  double r = 0.01;
  for (int i = 0; i < 14; ++i) grid.push_back(r /= 2);
  return grid;
}

template <std::floating_point Real = double>
struct KoenigsSeries {
  std::complex<Real> lambda;
  BasicSeries<Real> h;
  FamilySpec family;
};

template <std::floating_point Real = double>
struct SiegelSeries {
  Real alpha = 0;
  std::complex<Real> lambda;
  BasicSeries<Real> g;
  FamilySpec family;
  Real divisor_floor = 0;
  int divisor_floor_k = 0;
};

/// Max coefficient residual of a functional equation. `max_scaled` divides
/// each residual by max(1, sum of |terms| that produced that coefficient),
/// which is the rounding scale once coefficients grow geometrically.
struct ResidualReport {
  double max_abs = 0;
  double max_scaled = 0;
  int worst_k = 0;
};

namespace detail {

template <std::floating_point Real>
std::complex<Real> unit_power(Real alpha, int k) {
  // reduce k alpha mod 1 first so exact rationals give exact roots of unity
  Real t = Real(k) * alpha;
  t -= std::floor(t);
  return std::polar(Real(1), Real(2) * std::numbers::pi_v<Real> * t);
}

}  // namespace detail

/// Holds the powers f^j of the base map so that each Koenigs series costs
/// O(N^2): [f_lambda^j]_k = lambda^j [f^j]_k.
template <std::floating_point Real = double>
class KoenigsSolver {
 public:
  using C = std::complex<Real>;

  KoenigsSolver(FamilySpec family, int degree)
      : family_(std::move(family)), n_(degree),
        table_(static_cast<std::size_t>(degree + 1) * (degree + 1)) {
    if (degree < 2) throw PreconditionError("Koenigs series needs degree >= 2");
    const auto f = base_series<Real>(family_, n_);
    BasicSeries<Real> power = f;
    BasicSeries<Real> next(n_);
    for (int j = 1; j <= n_; ++j) {
      for (int k = j; k <= n_; ++k) at(j, k) = power[k];
      if (j < n_) {
        detail::mul_into(power, f, next);
        std::swap(power, next);
      }
    }
  }

  const FamilySpec& family() const noexcept { return family_; }
  int degree() const noexcept { return n_; }

  /// h_k (lambda^k - lambda) = -sum_{j<k} h_j lambda^j [f^j]_k
  KoenigsSeries<Real> solve(C lambda) const {
    if (lambda == C(0)) throw PreconditionError("Koenigs series: lambda must be non-zero");
    if (std::abs(std::abs(lambda) - Real(1)) < Real(1e-15))
      throw PreconditionError("Koenigs series: |lambda| = 1 is not attracting or repelling");
    std::vector<C> lp(static_cast<std::size_t>(n_) + 1);
    lp[0] = 1;
    for (int k = 1; k <= n_; ++k) lp[static_cast<std::size_t>(k)] = lp[static_cast<std::size_t>(k - 1)] * lambda;
    BasicSeries<Real> h(n_);
    h[1] = 1;
    for (int k = 2; k <= n_; ++k) {
      const C divisor = lp[static_cast<std::size_t>(k)] - lambda;
      if (std::abs(divisor) < Real(koenigs_divisor_guard))
        throw DivisorBreakdown("divisor_breakdown", k, static_cast<double>(std::abs(divisor)),
                               "Koenigs recurrence: |lambda^" + std::to_string(k) + " - lambda| below guard");
      C acc(0);
      for (int j = 1; j < k; ++j) acc += h[j] * lp[static_cast<std::size_t>(j)] * at(j, k);
      h[k] = -acc / divisor;
    }
    return {lambda, std::move(h), family_};
  }

 private:
  C& at(int j, int k) { return table_[static_cast<std::size_t>(j) * (n_ + 1) + k]; }
  const C& at(int j, int k) const { return table_[static_cast<std::size_t>(j) * (n_ + 1) + k]; }

  FamilySpec family_;
  int n_;
  std::vector<C> table_;
};

template <std::floating_point Real = double>
KoenigsSeries<Real> koenigs_series(const FamilySpec& family, std::complex<Real> lambda,
                                   int degree = default_degree) {
  return KoenigsSolver<Real>(family, degree).solve(lambda);
}

/// g_k (lambda^k - lambda) = lambda sum_{j=2}^k f_j [g^j]_k, lambda = e^{2 pi i alpha}.
template <std::floating_point Real = double>
SiegelSeries<Real> siegel_series(const FamilySpec& family, Real alpha, int degree = default_degree) {
  using C = std::complex<Real>;
  if (degree < 2) throw PreconditionError("Siegel series needs degree >= 2");
  if (!std::isfinite(alpha)) throw PreconditionError("Siegel series: rotation number not finite");
  const auto f = base_series<Real>(family, degree);
  const C lambda = detail::unit_power(alpha, 1);
  IncrementalPowers<Real> g(degree);
  Real floor = std::numeric_limits<Real>::infinity();
  int floor_k = 0;
  for (int k = 2; k <= degree; ++k) {
    const C divisor = detail::unit_power(alpha, k) - lambda;
    const Real ad = std::abs(divisor);
    if (ad < floor) {
      floor = ad;
      floor_k = k;
    }
    if (ad < Real(siegel_divisor_guard))
      throw DivisorBreakdown("small_divisor_breakdown", k, static_cast<double>(ad),
                             "Siegel recurrence: |lambda^" + std::to_string(k) +
                                 " - lambda| below guard (rotation number effectively rational)");
    const auto powers = g.advance(k);
    C acc(0);
    for (int j = 2; j <= k; ++j) acc += f[j] * powers[static_cast<std::size_t>(j)];
    g.set(k, lambda * acc / divisor);
  }
  return {alpha, lambda, g.series(), family, floor, floor_k};
}

namespace detail {

template <std::floating_point Real>
ResidualReport residual_report(const BasicSeries<Real>& lhs, const BasicSeries<Real>& rhs,
                               const BasicSeries<Real>& scale) {
  ResidualReport rep;
  for (int k = 0; k <= lhs.degree(); ++k) {
    const double r = static_cast<double>(std::abs(lhs[k] - rhs.coeff(k)));
    const double s = std::max(1.0, static_cast<double>(std::abs(scale.coeff(k))));
    if (r / s > rep.max_scaled) {
      rep.max_scaled = r / s;
      rep.worst_k = k;
    }
    rep.max_abs = std::max(rep.max_abs, r);
  }
  return rep;
}

}  // namespace detail

/// Formal residual of h(f_lambda) - lambda h.
template <std::floating_point Real>
ResidualReport koenigs_residual(const KoenigsSeries<Real>& ks) {
  const int n = ks.h.degree();
  const auto f = family_series<Real>(ks.family, ks.lambda, n);
  const auto lhs = compose(ks.h, f);
  auto rhs = ks.h;
  rhs *= ks.lambda;
  auto scale = compose(abs_coeffs(ks.h), abs_coeffs(f));
  for (int k = 0; k <= n; ++k) scale[k] += std::abs(rhs[k]);
  return detail::residual_report(lhs, rhs, scale);
}

/// Formal residual of f_lambda(g) - g(lambda .).
template <std::floating_point Real>
ResidualReport siegel_residual(const SiegelSeries<Real>& ss) {
  const int n = ss.g.degree();
  const auto f = family_series<Real>(ss.family, ss.lambda, n);
  const auto lhs = compose(f, ss.g);
  BasicSeries<Real> rhs(n);
  for (int k = 0; k <= n; ++k) rhs[k] = ss.g[k] * detail::unit_power(ss.alpha, k);
  auto scale = compose(abs_coeffs(f), abs_coeffs(ss.g));
  for (int k = 0; k <= n; ++k) scale[k] += std::abs(rhs[k]);
  return detail::residual_report(lhs, rhs, scale);
}

/// Largest r in entry_radius_grid() where evaluating h at full and half
/// truncation order agrees to entry_consistency_tol on |z| = r; 0 if none.
template <std::floating_point Real>
Real select_entry_radius(const BasicSeries<Real>& h) {
  for (const double r : entry_radius_grid())
    if (truncation_gap(h, Real(r)) <= Real(entry_consistency_tol)) return Real(r);
  return 0;
}

template <std::floating_point Real = double>
struct KoenigsValue {
  std::complex<Real> value;
  std::complex<Real> log_value;  // log h, accumulated without forming lambda^{-m}
  bool is_zero = false;
  long iterations = 0;
  Real entry_radius = 0;
};

/// Extends h to the basin through h(z) = lambda^{-m} h(f_lambda^m(z)).
template <std::floating_point Real = double>
class KoenigsEvaluator {
 public:
  using C = std::complex<Real>;

  explicit KoenigsEvaluator(KoenigsSeries<Real> ks)
      : ks_(std::move(ks)), entry_radius_(select_entry_radius(ks_.h)) {
    if (!(std::abs(ks_.lambda) < Real(1)))
      throw PreconditionError("basin extension needs an attracting fixed point (|lambda| < 1)");
  }

  const KoenigsSeries<Real>& series() const noexcept { return ks_; }
  Real entry_radius() const noexcept { return entry_radius_; }

  KoenigsValue<Real> operator()(C z, long budget = default_budget) const {
    if (entry_radius_ <= 0)
      throw NoConvergence("no entry radius: Koenigs series not self-consistent on any grid radius", 0);
    long m = 0;
    while (std::abs(z) > entry_radius_) {
      if (m >= budget)
        throw NoConvergence("iteration budget exhausted before entering the series disc", m);
      z = family_eval<Real>(ks_.family, ks_.lambda, z);
      ++m;
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw NoConvergence("orbit escaped (point outside the basin)", m);
    }
    KoenigsValue<Real> out;
    out.iterations = m;
    out.entry_radius = entry_radius_;
    const C hz = horner(ks_.h, z);
    if (hz == C(0)) {
      out.is_zero = true;
      out.value = 0;
      out.log_value = {-std::numeric_limits<Real>::infinity(), 0};
      return out;
    }
    out.log_value = std::log(hz) - Real(m) * std::log(ks_.lambda);
    out.value = std::exp(out.log_value);
    return out;
  }

 private:
  KoenigsSeries<Real> ks_;
  Real entry_radius_;
};

template <std::floating_point Real = double>
KoenigsValue<Real> koenigs_eval(const FamilySpec& family, std::complex<Real> lambda, std::complex<Real> z,
                                long budget = default_budget, int degree = default_degree) {
  return KoenigsEvaluator<Real>(koenigs_series<Real>(family, lambda, degree))(z, budget);
}

template <std::floating_point Real = double>
struct YoccozValue {
  std::complex<Real> lambda;
  std::complex<Real> w;
  Real u = 0;  // log |w / lambda|
  long iterations = 0;
  Real entry_radius = 0;
  bool koebe_ok = true;  // |w| < 4 |v|
};

/// w(lambda) = h_lambda(lambda v) for one family at a fixed truncation
/// degree. Reuses the power table of f across parameters.
template <std::floating_point Real = double>
class YoccozEvaluator {
 public:
  using C = std::complex<Real>;

  explicit YoccozEvaluator(const FamilySpec& family, int degree = default_degree,
                           long budget = default_budget)
      : solver_(family, degree), budget_(budget) {}

  const FamilySpec& family() const noexcept { return solver_.family(); }
  int degree() const noexcept { return solver_.degree(); }
  long budget() const noexcept { return budget_; }

  YoccozValue<Real> operator()(C lambda) const {
    if (!(std::abs(lambda) < Real(1)) || lambda == C(0))
      throw PreconditionError("Yoccoz function is defined for 0 < |lambda| < 1");
    const C v{static_cast<Real>(family().v.real()), static_cast<Real>(family().v.imag())};
    const KoenigsEvaluator<Real> eval(solver_.solve(lambda));
    const auto kv = eval(lambda * v, budget_);
    YoccozValue<Real> out;
    out.lambda = lambda;
    out.iterations = kv.iterations;
    out.entry_radius = kv.entry_radius;
    if (kv.is_zero) throw NoConvergence("Yoccoz function vanished (lambda v hit the fixed point)", kv.iterations);
    out.w = kv.value;
    out.u = kv.log_value.real() - std::log(std::abs(lambda));
    out.koebe_ok = kv.log_value.real() < std::log(Real(4) * std::abs(v));
    return out;
  }

 private:
  KoenigsSolver<Real> solver_;
  long budget_;
};

template <std::floating_point Real = double>
YoccozValue<Real> yoccoz_w(const FamilySpec& family, std::complex<Real> lambda, int degree = default_degree,
                           long budget = default_budget) {
  return YoccozEvaluator<Real>(family, degree, budget)(lambda);
}

/// Least-squares fit of w(lambda)/lambda = c0 + c1 lambda + c2 lambda^2 over
/// the given radii and equispaced angles; c0 estimates v.
inline std::complex<double> fit_v_asymptotic(const FamilySpec& family,
                                             const std::vector<double>& radii = {0.01, 0.02, 0.03, 0.04, 0.05},
                                             int angles = 8, int degree = default_degree) {
  const YoccozEvaluator<double> eval(family, degree);
  const auto rows = static_cast<Eigen::Index>(radii.size() * static_cast<std::size_t>(angles));
  Eigen::MatrixXcd a(rows, 3);
  Eigen::VectorXcd b(rows);
  Eigen::Index row = 0;
  for (const double r : radii) {
    for (int j = 0; j < angles; ++j) {
      const auto lambda = std::polar(r, 2 * std::numbers::pi * (j + 0.5) / angles);
      const auto y = eval(lambda);
      a(row, 0) = 1.0;
      a(row, 1) = lambda;
      a(row, 2) = lambda * lambda;
      b(row) = y.w / lambda;
      ++row;
    }
  }
  const Eigen::VectorXcd c = a.colPivHouseholderQr().solve(b);
  return c(0);
}

}  // namespace siegel

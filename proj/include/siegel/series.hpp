#pragma once

// Truncated complex power series centred at 0.
//
// A BasicSeries<Real> of degree N stores c_0..c_N. Binary operations pad the
// shorter operand with zeros, so mixing degrees is allowed; products and
// compositions are truncated at the larger degree.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "siegel/error.hpp"

namespace siegel {

inline constexpr int default_degree = 128;

template <std::floating_point Real>
class BasicSeries {
 public:
  using real_type = Real;
  using value_type = std::complex<Real>;

  BasicSeries() : coeffs_(2) {}

  /// Zero series of the given degree.
  explicit BasicSeries(int degree) : coeffs_(checked_size(degree)) {}

  explicit BasicSeries(std::vector<value_type> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw PreconditionError("series needs at least one coefficient");
  }

  static BasicSeries identity(int degree) {
    BasicSeries s(degree);
    if (degree >= 1) s.coeffs_[1] = value_type(1);
    return s;
  }

  static BasicSeries monomial(int degree, int power, value_type coeff = value_type(1)) {
    BasicSeries s(degree);
    if (power >= 0 && power <= degree) s.coeffs_[static_cast<std::size_t>(power)] = coeff;
    return s;
  }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  const value_type& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  value_type& operator[](int k) { return coeffs_[static_cast<std::size_t>(k)]; }

  /// Coefficient k, or zero beyond the stored degree.
  value_type coeff(int k) const {
    return (k >= 0 && k <= degree()) ? coeffs_[static_cast<std::size_t>(k)] : value_type(0);
  }

  std::span<const value_type> coeffs() const noexcept { return coeffs_; }

  bool all_finite() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const value_type& c) {
      return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
  }

  /// c_0 = 0 and c_1 = 1 exactly.
  bool is_normalized() const noexcept {
    return degree() >= 1 && coeffs_[0] == value_type(0) && coeffs_[1] == value_type(1);
  }

  bool is_zero() const noexcept {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const value_type& c) { return c == value_type(0); });
  }

  /// Copy cut or zero-padded to `new_degree`.
  BasicSeries truncated(int new_degree) const {
    BasicSeries out(new_degree);
    const int m = std::min(new_degree, degree());
    std::copy_n(coeffs_.begin(), m + 1, out.coeffs_.begin());
    return out;
  }

  template <std::floating_point Other>
  BasicSeries<Other> cast() const {
    std::vector<std::complex<Other>> c(coeffs_.size());
    for (std::size_t k = 0; k < c.size(); ++k)
      c[k] = {static_cast<Other>(coeffs_[k].real()), static_cast<Other>(coeffs_[k].imag())};
    return BasicSeries<Other>(std::move(c));
  }

  BasicSeries& operator*=(value_type s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

 private:
  static std::size_t checked_size(int degree) {
    if (degree < 0) throw PreconditionError("series degree must be non-negative");
    return static_cast<std::size_t>(degree) + 1;
  }

  std::vector<value_type> coeffs_;
};

using TruncatedSeries = BasicSeries<double>;
using ExtendedSeries = BasicSeries<long double>;

namespace detail {

template <std::floating_point Real>
void require_finite(const BasicSeries<Real>& a, const char* what) {
  if (!a.all_finite()) throw NonFiniteError(std::string(what) + ": non-finite coefficient");
}

// Truncated Cauchy product into `out` (degree of out decides the cut).
template <std::floating_point Real>
void mul_into(const BasicSeries<Real>& a, const BasicSeries<Real>& b, BasicSeries<Real>& out) {
  using C = std::complex<Real>;
  const int n = out.degree();
  const int da = std::min(a.degree(), n);
  const int db = std::min(b.degree(), n);
  for (int k = 0; k <= n; ++k) {
    C acc(0);
    const int lo = std::max(0, k - db);
    const int hi = std::min(k, da);
    for (int i = lo; i <= hi; ++i) acc += a[i] * b[k - i];
    out[k] = acc;
  }
}

}  // namespace detail

template <std::floating_point Real>
BasicSeries<Real> operator+(const BasicSeries<Real>& a, const BasicSeries<Real>& b) {
  detail::require_finite(a, "add");
  detail::require_finite(b, "add");
  BasicSeries<Real> out(std::max(a.degree(), b.degree()));
  for (int k = 0; k <= out.degree(); ++k) out[k] = a.coeff(k) + b.coeff(k);
  return out;
}

template <std::floating_point Real>
BasicSeries<Real> operator-(const BasicSeries<Real>& a, const BasicSeries<Real>& b) {
  detail::require_finite(a, "sub");
  detail::require_finite(b, "sub");
  BasicSeries<Real> out(std::max(a.degree(), b.degree()));
  for (int k = 0; k <= out.degree(); ++k) out[k] = a.coeff(k) - b.coeff(k);
  return out;
}

template <std::floating_point Real>
BasicSeries<Real> operator*(const BasicSeries<Real>& a, const BasicSeries<Real>& b) {
  detail::require_finite(a, "mul");
  detail::require_finite(b, "mul");
  BasicSeries<Real> out(std::max(a.degree(), b.degree()));
  detail::mul_into(a, b, out);
  return out;
}

template <std::floating_point Real>
BasicSeries<Real> operator*(std::complex<Real> s, BasicSeries<Real> a) {
  a *= s;
  return a;
}

template <std::floating_point Real>
BasicSeries<Real> operator*(Real s, BasicSeries<Real> a) {
  a *= std::complex<Real>(s);
  return a;
}

/// Coefficientwise absolute values; handy for a-priori rounding scales.
template <std::floating_point Real>
BasicSeries<Real> abs_coeffs(const BasicSeries<Real>& a) {
  BasicSeries<Real> out(a.degree());
  for (int k = 0; k <= a.degree(); ++k) out[k] = std::abs(a[k]);
  return out;
}

/// outer(inner(z)) through the larger of the two degrees. Accumulates the
/// powers inner^j one Cauchy product at a time.
template <std::floating_point Real>
BasicSeries<Real> compose(const BasicSeries<Real>& outer, const BasicSeries<Real>& inner) {
  detail::require_finite(outer, "compose");
  detail::require_finite(inner, "compose");
  if (inner[0] != std::complex<Real>(0))
    throw PreconditionError("compose: inner series must vanish at 0");

  const int n = std::max(outer.degree(), inner.degree());
  BasicSeries<Real> out(n);
  BasicSeries<Real> power(n);
  BasicSeries<Real> next(n);
  power[0] = 1;
  out[0] = outer[0];
  const BasicSeries<Real> base = inner.truncated(n);
  for (int j = 1; j <= std::min(outer.degree(), n); ++j) {
    detail::mul_into(power, base, next);
    std::swap(power, next);
    const auto c = outer[j];
    if (c == std::complex<Real>(0)) continue;
    // inner^j starts at z^j
    for (int k = j; k <= n; ++k) out[k] += c * power[k];
  }
  return out;
}

/// Powers b^j of a normalized series b that is being determined one
/// coefficient at a time. Coefficient k of b^j (j >= 2) only involves
/// b_1..b_{k-1}, which is what makes coefficient recurrences of the form
///   b_k * divisor = sum_j a_j [b^j]_k
/// solvable in O(N^3) without recomputing powers.
template <std::floating_point Real>
class IncrementalPowers {
 public:
  using value_type = std::complex<Real>;

  explicit IncrementalPowers(int degree)
      : n_(degree), table_(static_cast<std::size_t>(degree + 1) * (degree + 1)) {
    at(0, 0) = 1;
    at(1, 1) = 1;
  }

  int degree() const noexcept { return n_; }

  /// [b^j]_k for j = 2..k, assuming b_1..b_{k-1} have been set.
  /// Stores them in the table and returns a view indexed by j (entries 0,1 unused).
  std::span<const value_type> advance(int k) {
    for (int j = 2; j <= k; ++j) {
      value_type acc(0);
      // [b^j]_k = sum_i b_i [b^{j-1}]_{k-i}, with k - i >= j - 1
      for (int i = 1; i <= k - (j - 1); ++i) acc += at(1, i) * at(j - 1, k - i);
      at(j, k) = acc;
    }
    scratch_.assign(static_cast<std::size_t>(k + 1), value_type(0));
    for (int j = 2; j <= k; ++j) scratch_[static_cast<std::size_t>(j)] = at(j, k);
    return scratch_;
  }

  /// Fixes b_k; must follow advance(k).
  void set(int k, value_type bk) { at(1, k) = bk; }

  value_type coeff(int k) const { return at(1, k); }

  BasicSeries<Real> series() const {
    BasicSeries<Real> s(n_);
    for (int k = 1; k <= n_; ++k) s[k] = at(1, k);
    return s;
  }

 private:
  value_type& at(int j, int k) { return table_[static_cast<std::size_t>(j) * (n_ + 1) + k]; }
  const value_type& at(int j, int k) const {
    return table_[static_cast<std::size_t>(j) * (n_ + 1) + k];
  }

  int n_;
  std::vector<value_type> table_;
  std::vector<value_type> scratch_;
};

/// Compositional inverse b of a normalized series a: a(b(z)) = z through degree N.
template <std::floating_point Real>
BasicSeries<Real> revert(const BasicSeries<Real>& a) {
  detail::require_finite(a, "revert");
  if (!a.is_normalized()) throw PreconditionError("revert: series must be z + O(z^2)");
  const int n = a.degree();
  IncrementalPowers<Real> b(n);
  for (int k = 2; k <= n; ++k) {
    const auto powers = b.advance(k);
    std::complex<Real> acc(0);
    for (int j = 2; j <= k; ++j) acc += a[j] * powers[static_cast<std::size_t>(j)];
    b.set(k, -acc);
  }
  return b.series();
}

template <std::floating_point Real>
struct EvalResult {
  std::complex<Real> value;
  Real tail_bound = 0;
  bool reliable = true;
};

/// Horner evaluation with an advisory geometric tail estimate
///   |c_N| |z|^{N+1} / (1 - q),  q = |z| max_{k > N/2} |c_k / c_{k-1}|.
/// When q >= 1 (or a ratio is undefined) the bound is flagged unreliable.
template <std::floating_point Real>
EvalResult<Real> evaluate(const BasicSeries<Real>& a, std::complex<Real> z) {
  using C = std::complex<Real>;
  const int n = a.degree();
  C acc(0);
  for (int k = n; k >= 0; --k) acc = acc * z + a[k];

  EvalResult<Real> out{acc, 0, true};
  Real ratio = 0;
  for (int k = n / 2 + 1; k <= n; ++k) {
    const Real num = std::abs(a[k]);
    const Real den = std::abs(a[k - 1]);
    if (num == 0) continue;
    if (den == 0) {
      out.reliable = false;
      break;
    }
    ratio = std::max(ratio, num / den);
  }
  const Real az = std::abs(z);
  const Real q = az * ratio;
  if (!out.reliable || q >= 1) {
    out.reliable = false;
    out.tail_bound = std::numeric_limits<Real>::infinity();
    return out;
  }
  out.tail_bound = std::abs(a[n]) * std::pow(az, Real(n + 1)) / (1 - q);
  return out;
}

/// Value only.
template <std::floating_point Real>
std::complex<Real> horner(const BasicSeries<Real>& a, std::complex<Real> z) {
  std::complex<Real> acc(0);
  for (int k = a.degree(); k >= 0; --k) acc = acc * z + a[k];
  return acc;
}

/// Bound on |a_N(z) - a_{N/2}(z)| over |z| = r: the discrepancy between
/// evaluating at full and at half truncation order.
template <std::floating_point Real>
Real truncation_gap(const BasicSeries<Real>& a, Real r) {
  const int n = a.degree();
  Real acc = 0;
  Real rk = std::pow(r, Real(n / 2 + 1));
  for (int k = n / 2 + 1; k <= n; ++k) {
    acc += std::abs(a[k]) * rk;
    rk *= r;
  }
  return acc;
}

template <std::floating_point Real>
struct DerivativeResult {
  BasicSeries<Real> series;
  bool exhausted = false;  // k exceeded the degree, result is the zero series
};

/// k-th formal derivative (degree N - k).
template <std::floating_point Real>
DerivativeResult<Real> derivative(const BasicSeries<Real>& a, int k) {
  if (k < 0) throw PreconditionError("derivative order must be non-negative");
  const int n = a.degree();
  if (k > n) return {BasicSeries<Real>(0), true};
  BasicSeries<Real> out(n - k);
  for (int m = k; m <= n; ++m) {
    Real falling = 1;
    for (int i = 0; i < k; ++i) falling *= Real(m - i);
    out[m - k] = a[m] * falling;
  }
  return {std::move(out), false};
}

/// Largest coefficientwise |a_k - b_k| over the common padded degree.
template <std::floating_point Real>
Real max_coeff_diff(const BasicSeries<Real>& a, const BasicSeries<Real>& b) {
  const int n = std::max(a.degree(), b.degree());
  Real m = 0;
  for (int k = 0; k <= n; ++k) m = std::max(m, std::abs(a.coeff(k) - b.coeff(k)));
  return m;
}

}  // namespace siegel

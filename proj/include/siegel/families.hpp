#pragma once

// One-parameter families f_lambda = lambda * f where f(0) = 0, f'(0) = 1 and f
// has a single non-zero critical or asymptotic value v (up to the rotational
// symmetry f(omega z) = omega f(z) when symmetry_order > 1).

#include <cmath>
#include <complex>
#include <concepts>
#include <functional>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "siegel/error.hpp"
#include "siegel/series.hpp"

namespace siegel {

enum class FamilyKind { quadratic, poly, exp, zexp, sin, tan, reduced, custom };

/// A user-supplied base map: its expansion at 0 and a closed-form evaluator.
struct CustomMap {
  std::string name;
  std::vector<std::complex<double>> coeffs;  // c_0..c_M, c_0 = 0, c_1 = 1
  std::function<std::complex<double>(std::complex<double>)> eval;
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::quadratic;
  int d = 0;                  // poly only
  std::complex<double> v;     // the distinguished non-zero singular value
  int symmetry_order = 1;     // f(omega z) = omega f(z), omega^n = 1
  int reduction_order = 1;    // reduced only: F(w) = f(w^{1/n})^n
  std::shared_ptr<const FamilySpec> inner;   // reduced only
  std::shared_ptr<const CustomMap> custom;   // custom only
  // The one-singular-value hypothesis is catalog metadata; user maps are
  // accepted unverified.
  bool hypothesis_verified = true;
  std::string singular_value_note;

  std::string id() const {
    switch (kind) {
      case FamilyKind::quadratic: return "quadratic";
      case FamilyKind::poly: return "poly_" + std::to_string(d);
      case FamilyKind::exp: return "exp";
      case FamilyKind::zexp: return "zexp";
      case FamilyKind::sin: return "sin";
      case FamilyKind::tan: return "tan";
      case FamilyKind::reduced: return "reduced(" + inner->id() + ")";
      case FamilyKind::custom: return "custom(" + custom->name + ")";
    }
    return "?";
  }

  /// log 4 + log|v|: the Koebe ceiling for u and for every rho.
  double koebe_ceiling() const { return std::log(4.0) + std::log(std::abs(v)); }
};

inline constexpr double tan_pole_threshold = 1e-12;

inline FamilySpec make_quadratic() {
  FamilySpec s;
  s.kind = FamilyKind::quadratic;
  s.v = 0.25;
  s.singular_value_note = "critical value f(1/2)";
  return s;
}

inline FamilySpec make_poly(int d = 3) {
  if (d < 2) throw PreconditionError("poly family needs d >= 2");
  FamilySpec s;
  s.kind = FamilyKind::poly;
  s.d = d;
  s.v = -1.0;
  s.singular_value_note = "critical value f(-d)";
  return s;
}

inline FamilySpec make_exp() {
  FamilySpec s;
  s.kind = FamilyKind::exp;
  s.v = -1.0;
  s.singular_value_note = "asymptotic value as Re z -> -inf";
  return s;
}

inline FamilySpec make_zexp() {
  FamilySpec s;
  s.kind = FamilyKind::zexp;
  s.v = -std::exp(-1.0);
  // 0 is also asymptotic for z e^z but only non-zero values count.
  s.singular_value_note = "critical value f(-1); 0 is an asymptotic value";
  return s;
}

inline FamilySpec make_sin() {
  FamilySpec s;
  s.kind = FamilyKind::sin;
  s.v = 1.0;
  s.symmetry_order = 2;
  s.singular_value_note = "critical values +-1, identified by z -> -z";
  return s;
}

inline FamilySpec make_tan() {
  FamilySpec s;
  s.kind = FamilyKind::tan;
  s.v = {0.0, 1.0};
  s.symmetry_order = 2;
  s.singular_value_note = "asymptotic values +-i, +i chosen";
  return s;
}

/// F(w) = f(w^{1/n})^n for an n-symmetric family; F at lambda^n plays the
/// role of f at lambda.
inline FamilySpec symmetry_reduce(const FamilySpec& spec) {
  const int n = spec.symmetry_order;
  if (n <= 1) throw PreconditionError("symmetry_reduce: family " + spec.id() + " has no rotational symmetry");
  FamilySpec s;
  s.kind = FamilyKind::reduced;
  s.reduction_order = n;
  s.inner = std::make_shared<const FamilySpec>(spec);
  s.v = std::pow(spec.v, n);
  s.symmetry_order = 1;
  s.hypothesis_verified = spec.hypothesis_verified;
  s.singular_value_note = "v^" + std::to_string(n) + " of " + spec.id() +
                          "; parameter lambda of the base family maps to lambda^" + std::to_string(n);
  return s;
}

inline FamilySpec custom_family(CustomMap map, std::complex<double> v, int symmetry_order = 1) {
  if (map.coeffs.size() < 2 || map.coeffs[0] != 0.0 || map.coeffs[1] != 1.0)
    throw PreconditionError("custom family: expansion must start z + O(z^2)");
  if (v == 0.0) throw PreconditionError("custom family: singular value must be non-zero");
  if (!map.eval) throw PreconditionError("custom family: evaluator missing");
  FamilySpec s;
  s.kind = FamilyKind::custom;
  s.v = v;
  s.symmetry_order = symmetry_order;
  s.hypothesis_verified = false;
  s.singular_value_note = "user supplied, not verified";
  s.custom = std::make_shared<const CustomMap>(std::move(map));
  return s;
}

/// The six families: quadratic, poly_d (d = 3), exp, zexp, sin, tan.
inline std::vector<FamilySpec> family_catalog() {
  return {make_quadratic(), make_poly(3), make_exp(), make_zexp(), make_sin(), make_tan()};
}

/// Accepts catalog ids plus "poly_D", "poly" and "<id>_reduced" / "reduced(<id>)".
inline FamilySpec family_by_name(const std::string& name) {
  if (name == "quadratic") return make_quadratic();
  if (name == "poly") return make_poly(3);
  if (name.rfind("poly_", 0) == 0) {
    try {
      return make_poly(std::stoi(name.substr(5)));
    } catch (const std::logic_error&) {
      throw PreconditionError("bad poly degree in family name: " + name);
    }
  }
  if (name == "exp") return make_exp();
  if (name == "zexp") return make_zexp();
  if (name == "sin") return make_sin();
  if (name == "tan") return make_tan();
  const std::string suffix = "_reduced";
  if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
    return symmetry_reduce(family_by_name(name.substr(0, name.size() - suffix.size())));
  if (name.rfind("reduced(", 0) == 0 && name.back() == ')')
    return symmetry_reduce(family_by_name(name.substr(8, name.size() - 9)));
  throw PreconditionError("unknown family: " + name);
}

namespace detail {

template <std::floating_point Real>
BasicSeries<Real> tan_series(int n) {
  // tan' = 1 + tan^2, so k t_k = [t^2]_{k-1} for k >= 2
  BasicSeries<Real> t(n);
  if (n >= 1) t[1] = 1;
  for (int k = 2; k <= n; ++k) {
    std::complex<Real> sq(0);
    for (int i = 1; i < k - 1; ++i) sq += t[i] * t[k - 1 - i];
    t[k] = sq / Real(k);
  }
  return t;
}

// e^z - 1 without cancellation near 0.
template <std::floating_point Real>
std::complex<Real> expm1(std::complex<Real> z) {
  const Real x = z.real();
  const Real y = z.imag();
  const Real s = std::sin(y / 2);
  const Real re = std::expm1(x) * std::cos(y) - 2 * s * s;
  const Real im = std::exp(x) * std::sin(y);
  return {re, im};
}

}  // namespace detail

/// Expansion of the base map f through degree N, c_0 = 0 and c_1 = 1 exactly.
template <std::floating_point Real = double>
BasicSeries<Real> base_series(const FamilySpec& spec, int n) {
  if (n < 1) throw PreconditionError("base_series: degree must be >= 1");
  BasicSeries<Real> s(n);
  switch (spec.kind) {
    case FamilyKind::quadratic:
      s[1] = 1;
      if (n >= 2) s[2] = -1;
      break;
    case FamilyKind::poly: {
      // (1 + z/d)^d - 1 = sum_k C(d,k) d^{-k} z^k
      Real c = 1;
      for (int k = 1; k <= std::min(n, spec.d); ++k) {
        c = c * Real(spec.d - k + 1) / Real(k) / Real(spec.d);
        s[k] = c;
      }
      s[1] = 1;
      break;
    }
    case FamilyKind::exp: {
      Real c = 1;
      for (int k = 1; k <= n; ++k) {
        c /= Real(k);
        s[k] = c;
      }
      break;
    }
    case FamilyKind::zexp: {
      Real c = 1;
      s[1] = 1;
      for (int k = 2; k <= n; ++k) {
        c /= Real(k - 1);
        s[k] = c;
      }
      break;
    }
    case FamilyKind::sin: {
      Real c = 1;
      for (int k = 1; k <= n; k += 2) {
        if (k > 1) c = -c / (Real(k) * Real(k - 1));
        s[k] = c;
      }
      break;
    }
    case FamilyKind::tan:
      return detail::tan_series<Real>(n);
    case FamilyKind::reduced: {
      const int m = spec.reduction_order;
      const auto f = base_series<Real>(*spec.inner, m * n);
      BasicSeries<Real> power = f;
      BasicSeries<Real> next(m * n);
      for (int j = 1; j < m; ++j) {
        detail::mul_into(power, f, next);
        std::swap(power, next);
      }
      for (int k = 1; k <= n; ++k) s[k] = power[m * k];
      s[1] = 1;
      break;
    }
    case FamilyKind::custom: {
      const auto& c = spec.custom->coeffs;
      for (int k = 0; k <= n && k < static_cast<int>(c.size()); ++k)
        s[k] = {static_cast<Real>(c[static_cast<std::size_t>(k)].real()),
                static_cast<Real>(c[static_cast<std::size_t>(k)].imag())};
      break;
    }
  }
  return s;
}

/// Expansion of f_lambda = lambda f; coefficient 1 equals lambda.
template <std::floating_point Real = double>
BasicSeries<Real> family_series(const FamilySpec& spec, std::complex<Real> lambda, int n) {
  auto s = base_series<Real>(spec, n);
  s *= lambda;
  return s;
}

/// Closed-form f(z). Throws PoleError near a pole of tan.
template <std::floating_point Real = double>
std::complex<Real> eval_base(const FamilySpec& spec, std::complex<Real> z) {
  using C = std::complex<Real>;
  switch (spec.kind) {
    case FamilyKind::quadratic:
      return z * (C(1) - z);
    case FamilyKind::poly: {
      // Horner on the binomial expansion keeps relative accuracy near 0.
      // c_d = d^{-d}, c_{k-1} = c_k k d / (d - k + 1)
      const Real dd = Real(spec.d);
      Real c = std::pow(dd, -dd);
      C acc(0);
      for (int k = spec.d; k >= 1; --k) {
        acc = (acc + c) * z;
        c = c * Real(k) * dd / (dd - Real(k) + 1);
      }
      return acc;
    }
    case FamilyKind::exp:
      return detail::expm1(z);
    case FamilyKind::zexp:
      return z * std::exp(z);
    case FamilyKind::sin:
      return std::sin(z);
    case FamilyKind::tan: {
      const C c = std::cos(z);
      if (std::abs(c) < Real(tan_pole_threshold)) throw PoleError("tan: evaluation at a pole");
      return std::sin(z) / c;
    }
    case FamilyKind::reduced: {
      const int m = spec.reduction_order;
      const C root = (m == 2) ? std::sqrt(z) : std::pow(z, Real(1) / Real(m));
      const C fz = eval_base<Real>(*spec.inner, root);
      C out(1);
      for (int j = 0; j < m; ++j) out *= fz;
      return out;
    }
    case FamilyKind::custom: {
      const auto r = spec.custom->eval({static_cast<double>(z.real()), static_cast<double>(z.imag())});
      return {static_cast<Real>(r.real()), static_cast<Real>(r.imag())};
    }
  }
  return C(0);
}

/// lambda * f(z) in closed form.
template <std::floating_point Real = double>
std::complex<Real> family_eval(const FamilySpec& spec, std::complex<Real> lambda, std::complex<Real> z) {
  return lambda * eval_base<Real>(spec, z);
}

}  // namespace siegel

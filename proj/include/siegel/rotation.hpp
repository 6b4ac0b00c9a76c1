#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "siegel/error.hpp"

namespace siegel {

enum class RotationTag { golden, rational, float_value, cf };

/// A rotation number alpha in (0,1); lambda = e^{2 pi i alpha}.
struct RotationNumber {
  double value = 0;
  std::vector<std::int64_t> cf;  // partial quotients a_1, a_2, ... of [0; a_1, a_2, ...]
  RotationTag tag = RotationTag::float_value;
  std::int64_t p = 0;  // rational tag only, reduced
  std::int64_t q = 1;

  bool is_rational() const noexcept { return tag == RotationTag::rational; }

  std::string describe() const {
    switch (tag) {
      case RotationTag::golden: return "golden";
      case RotationTag::rational: return "rat:" + std::to_string(p) + "/" + std::to_string(q);
      case RotationTag::cf: {
        std::string s = "cf:";
        for (std::size_t i = 0; i < cf.size(); ++i) s += (i ? "," : "") + std::to_string(cf[i]);
        return s;
      }
      case RotationTag::float_value: break;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "float:%.17g", value);
    return buf;
  }

  static RotationNumber from_float(double x) {
    if (!std::isfinite(x)) throw PreconditionError("rotation number must be finite");
    RotationNumber r;
    r.value = x;
    r.tag = RotationTag::float_value;
    return r;
  }

  static RotationNumber rational(std::int64_t p, std::int64_t q) {
    if (q <= 0) throw PreconditionError("rational rotation number needs q > 0");
    const auto g = std::gcd(p, q);
    RotationNumber r;
    r.p = p / g;
    r.q = q / g;
    r.value = static_cast<double>(r.p) / static_cast<double>(r.q);
    r.tag = RotationTag::rational;
    return r;
  }

  static RotationNumber golden();
  static RotationNumber silver();
};

namespace detail {

// [0; a_1, ..., a_n] as p/q via the convergent recurrence.
inline std::pair<std::int64_t, std::int64_t> cf_fraction(const std::vector<std::int64_t>& a) {
  std::int64_t p_prev = 1, p = 0;
  std::int64_t q_prev = 0, q = 1;
  for (const auto ai : a) {
    p_prev = std::exchange(p, ai * p + p_prev);
    q_prev = std::exchange(q, ai * q + q_prev);
  }
  return {p, q};
}

inline double cf_value(const std::vector<std::int64_t>& a) {
  // backward evaluation is the accurate one for long expansions
  double x = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) x = 1.0 / (static_cast<double>(*it) + x);
  return x;
}

}  // namespace detail

enum class CfKind {
  terminating,  // the list is the whole expansion: an exact rational
  prefix,       // leading quotients of an irrational number
};

/// [0; a_1, a_2, ...]. A terminating list yields the reduced rational p/q.
inline RotationNumber rotation_from_cf(const std::vector<std::int64_t>& coeffs,
                                       CfKind kind = CfKind::terminating) {
  if (coeffs.empty()) throw PreconditionError("continued fraction needs at least one partial quotient");
  for (const auto a : coeffs)
    if (a < 1) throw PreconditionError("continued fraction partial quotients must be >= 1");
  RotationNumber r;
  r.cf = coeffs;
  r.value = detail::cf_value(coeffs);
  if (kind == CfKind::terminating) {
    // denominators overflow int64 only for absurdly long lists; fall back to a prefix then
    if (coeffs.size() <= 80) {
      const auto [p, q] = detail::cf_fraction(coeffs);
      r.tag = RotationTag::rational;
      r.p = p;
      r.q = q;
      return r;
    }
  }
  r.tag = RotationTag::cf;
  return r;
}

inline RotationNumber RotationNumber::golden() {
  RotationNumber r;
  r.value = (std::sqrt(5.0) - 1.0) / 2.0;
  r.cf.assign(40, 1);
  r.tag = RotationTag::golden;
  return r;
}

inline RotationNumber RotationNumber::silver() {
  RotationNumber r;
  r.value = std::sqrt(2.0) - 1.0;
  r.cf.assign(30, 2);
  r.tag = RotationTag::cf;
  return r;
}

/// Partial quotients of x in (0,1) by the floating-point Gauss map, stopping
/// once the remainder is at rounding level.
inline std::vector<std::int64_t> float_to_cf(double x, int max_terms = 40) {
  std::vector<std::int64_t> out;
  x -= std::floor(x);
  for (int i = 0; i < max_terms; ++i) {
    if (x < 1e-15) break;
    const double y = 1.0 / x;
    const double a = std::floor(y);
    if (a > 1e15) break;
    out.push_back(static_cast<std::int64_t>(a));
    x = y - a;
  }
  return out;
}

struct Convergent {
  std::int64_t p = 0;
  std::int64_t q = 1;
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

/// Convergents p_n/q_n of alpha (from its stored expansion when present).
/// Denominators stop at `max_q`.
inline std::vector<Convergent> convergents(const RotationNumber& alpha, std::int64_t max_q = 1'000'000'000) {
  std::vector<std::int64_t> a;
  if (alpha.tag == RotationTag::rational) {
    // Euclid on p/q gives the exact expansion
    std::int64_t num = alpha.p % alpha.q, den = alpha.q;
    if (num < 0) num += den;
    while (num != 0) {
      a.push_back(den / num);
      den = std::exchange(num, den % num);
    }
  } else if (!alpha.cf.empty()) {
    a = alpha.cf;
  } else {
    a = float_to_cf(alpha.value);
  }
  const auto base = static_cast<std::int64_t>(std::floor(alpha.value));
  std::vector<Convergent> out;
  std::int64_t p0 = 1, p1 = 0, q0 = 0, q1 = 1;
  for (const auto ai : a) {
    const auto p2 = ai * p1 + p0;
    const auto q2 = ai * q1 + q0;
    if (q2 > max_q) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    out.push_back({p1 + base * q1, q1});
  }
  return out;
}

/// "golden", "silver", "float:X", "cf:a1,a2,...", "rat:P/Q" or a bare number.
inline RotationNumber parse_rotation(const std::string& text) {
  auto bad = [&](const std::string& why) { return PreconditionError("bad rotation number '" + text + "': " + why); };
  try {
    if (text == "golden") return RotationNumber::golden();
    if (text == "silver") return RotationNumber::silver();
    if (text.rfind("float:", 0) == 0) return RotationNumber::from_float(std::stod(text.substr(6)));
    if (text.rfind("rat:", 0) == 0) {
      const auto body = text.substr(4);
      const auto slash = body.find('/');
      if (slash == std::string::npos) throw bad("expected P/Q");
      return RotationNumber::rational(std::stoll(body.substr(0, slash)), std::stoll(body.substr(slash + 1)));
    }
    if (text.rfind("cf:", 0) == 0) {
      std::vector<std::int64_t> a;
      std::size_t pos = 3;
      while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (tok.empty()) throw bad("empty partial quotient");
        a.push_back(std::stoll(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      // "cf:" lists the leading quotients of an irrational; use rat: for exact rationals
      return rotation_from_cf(a, CfKind::prefix);
    }
    return RotationNumber::from_float(std::stod(text));
  } catch (const std::logic_error&) {
    throw bad("not a number");
  }
}

}  // namespace siegel

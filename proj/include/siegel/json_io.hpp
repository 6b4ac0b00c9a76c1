#pragma once

// JSON serialization of results. Complex numbers are [re, im] pairs; a
// series is the array of its coefficients c_0..c_N.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "json.hpp"
#include "siegel/construction.hpp"
#include "siegel/error.hpp"
#include "siegel/families.hpp"
#include "siegel/linearize.hpp"
#include "siegel/qanorm.hpp"
#include "siegel/radius.hpp"
#include "siegel/rotation.hpp"
#include "siegel/series.hpp"

namespace siegel {

using json = nlohmann::json;

inline json cplx(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline std::complex<double> cplx_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw PreconditionError("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

/// Non-finite doubles become null (JSON has no infinities).
inline json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json series_to_json(const TruncatedSeries& s) {
  json arr = json::array();
  for (const auto& c : s.coeffs()) arr.push_back(cplx(c));
  return arr;
}

/// Accepts a bare coefficient array or an object with a "coeffs" member.
inline TruncatedSeries series_from_json(const json& j) {
  const json& arr = j.is_object() ? j.at("coeffs") : j;
  if (!arr.is_array() || arr.empty()) throw PreconditionError("series JSON must be a non-empty coefficient array");
  std::vector<std::complex<double>> c;
  for (const auto& e : arr) c.push_back(cplx_from(e));
  return TruncatedSeries(std::move(c));
}

inline void to_json(json& j, const FamilySpec& f) {
  j = json{{"id", f.id()},
           {"v", cplx(f.v)},
           {"koebe_ceiling", f.koebe_ceiling()},
           {"symmetry_order", f.symmetry_order},
           {"hypothesis_verified", f.hypothesis_verified},
           {"singular_value_note", f.singular_value_note}};
  if (f.kind == FamilyKind::poly) j["degree"] = f.d;
  if (f.symmetry_order > 1) j["reduced_form"] = symmetry_reduce(f).id();
  if (f.kind == FamilyKind::reduced) j["reduction_order"] = f.reduction_order;
}

inline void to_json(json& j, const RotationNumber& a) {
  j = json{{"value", a.value}, {"tag", a.describe()}};
  if (a.is_rational()) j["rational"] = {a.p, a.q};
}

inline void to_json(json& j, const YoccozValue<double>& y) {
  j = json{{"lambda", cplx(y.lambda)},     {"w", cplx(y.w)},
           {"u", y.u},                     {"iterations", y.iterations},
           {"entry_radius", y.entry_radius}, {"koebe_ok", y.koebe_ok}};
}

inline void to_json(json& j, const RadiusSample& s) {
  j = json{{"parameter", s.parameter}, {"value", num(s.value)}, {"status", s.status}, {"iterations", s.iterations}};
}

inline void to_json(json& j, const RadiusEstimate& e) {
  j = json{{"alpha", e.alpha},
           {"method", to_string(e.method)},
           {"rho_hat", num(e.rho_hat)},
           {"converged", e.converged},
           {"diverging_to_minus_infinity", e.diverging_to_minus_infinity},
           {"koebe_ceiling", e.koebe_ceiling},
           {"samples", e.samples}};
  if (e.method == RadiusMethod::coefficient) {
    j["window_max"] = num(e.window_max);
    j["window_median"] = num(e.window_median);
    j["divisor_floor"] = num(e.divisor_floor);
  }
}

inline void to_json(json& j, const PoissonSample& s) {
  j = json{{"r", s.r}, {"u", num(s.u)}, {"u_eps", num(s.u_eps)}, {"margin", num(s.margin)}, {"status", s.status}};
}

inline void to_json(json& j, const PoissonReport& r) {
  j = json{{"alpha", r.alpha},
           {"delta", r.delta},
           {"L", r.left},
           {"R", r.right},
           {"M", r.ceiling},
           {"limit_value", r.limit_value},
           {"violations", r.violations},
           {"unavailable", r.unavailable},
           {"min_margin", num(r.min_margin)},
           {"samples", r.samples}};
}

inline void to_json(json& j, const NormResult& n) {
  j = json{{"r", n.r}, {"K", n.K}, {"value", n.value}, {"argmax_k", n.argmax_k}, {"argmax_point", cplx(n.argmax_point)}};
}

inline void to_json(json& j, const BoundaryPoint& p) {
  j = json{{"theta", p.theta}, {"z", cplx(p.z)}, {"abs_gprime", p.abs_gprime}};
}

inline void to_json(json& j, const ConstructionStep& s) {
  j = json{{"n", s.n},
           {"alpha", s.alpha},
           {"eps", s.eps},
           {"interval", {s.interval_lo, s.interval_hi}},
           {"rho_target", s.rho_target},
           {"rho_achieved", s.rho_achieved},
           {"rho_ceiling", s.rho_ceiling},
           {"norm_delta", s.norm_delta},
           {"norm_bound", s.norm_bound},
           {"lo_bracket", {s.lo_bracket.p, s.lo_bracket.q}},
           {"candidates_tried", s.candidates_tried},
           {"eps_shrinks", s.eps_shrinks},
           {"estimator_calls", s.estimator_calls},
           {"radial_rho", s.radial_rho ? json(*s.radial_rho) : json(nullptr)},
           {"radial_converged", s.radial_converged},
           {"radial_diverging", s.radial_diverging}};
}

inline void to_json(json& j, const ConstructionReport& r) {
  j = json{{"label", r.label},
           {"family", r.family},
           {"alpha0", r.alpha0},
           {"rho0", r.rho0},
           {"eps0", r.eps0},
           {"rho_inf", r.rho_inf},
           {"r_inf", r.r_inf},
           {"delta", r.delta},
           {"tol_rho", r.tol_rho},
           {"schedule", r.schedule},
           {"steps", r.steps},
           {"completed", r.completed}};
  if (!r.completed) {
    j["stall_reason"] = r.stall_reason;
    return;
  }
  json radii = json::array();
  for (const double rho : r.schedule) radii.push_back(std::exp(rho));
  j["schedule_radii"] = radii;
  j["alpha_final"] = r.alpha_final;
  j["rho_final"] = r.rho_final;
  j["nested_ok"] = r.nested_ok;
  j["norm_deltas_ok"] = r.norm_deltas_ok;
  j["final_distance"] = r.final_distance;
  j["pairwise_distances"] = r.pairwise_distances;
  j["cauchy_ok"] = r.cauchy_ok;
  j["gprime_min"] = r.gprime_min;
  j["gprime_max"] = r.gprime_max;
  j["self_intersections"] = r.self_intersections;
  j["boundary"] = r.boundary;
}

inline json error_to_json(const Error& e) {
  json j{{"error", e.code()},
         {"kind", e.kind() == ErrorKind::precondition ? "precondition" : "numerical"},
         {"message", e.what()}};
  if (const auto* d = dynamic_cast<const DivisorBreakdown*>(&e)) {
    j["k"] = d->k();
    j["divisor"] = d->divisor();
  } else if (const auto* n = dynamic_cast<const NoConvergence*>(&e)) {
    j["iterations"] = n->iterations();
  } else if (const auto* u = dynamic_cast<const UnreliableRadius*>(&e)) {
    j["radius"] = u->radius();
    j["gap"] = u->gap();
  } else if (const auto* s = dynamic_cast<const ConstructionStalled*>(&e)) {
    j["partial"] = s->partial();
  }
  return j;
}

}  // namespace siegel

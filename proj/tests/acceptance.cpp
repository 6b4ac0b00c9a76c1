// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "siegel/parallel.hpp"
#include "siegel/siegel.hpp"

using namespace siegel;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const int workers = default_worker_count();

// 1. |w| < 4|v| on a 100 x 100 polar grid, 0.05 <= |lambda| <= 0.95.
Outcome koebe_bound() {
  int violations = 0, failures = 0, evaluated = 0;
  for (const auto& f : {make_quadratic(), make_exp()}) {
    const YoccozEvaluator<double> eval(f);
    const double bound = 4 * std::abs(f.v);
    const auto res = parallel_map(10000, workers, [&](std::size_t idx) {
      const double r = 0.05 + 0.9 * static_cast<double>(idx / 100) / 99;
      const double t = 2 * std::numbers::pi * static_cast<double>(idx % 100) / 100;
      try {
        return std::abs(eval(std::polar(r, t)).w) < bound ? 0 : 1;
      } catch (const Error&) {
        return -1;
      }
    });
    for (const int v : res) {
      if (v < 0) {
        ++failures;
        continue;
      }
      ++evaluated;
      violations += v;
    }
  }
  return {violations == 0 && evaluated > 0,
          fmt("violations=%d evaluated=%d unavailable=%d", violations, evaluated, failures)};
}

// 2. LS extrapolation of w/lambda to v within 1% for all six families.
Outcome v_asymptotic() {
  double worst = 0;
  std::string who;
  for (const auto& f : family_catalog()) {
    const auto F = f.symmetry_order > 1 ? symmetry_reduce(f) : f;
    const double rel = std::abs(fit_v_asymptotic(F) - F.v) / std::abs(F.v);
    if (rel >= worst) {
      worst = rel;
      who = F.id();
    }
  }
  return {worst <= 0.01, fmt("worst relative error %.2e (%s)", worst, who.c_str())};
}

// 3. Formal residuals, scaled by the magnitude of the contributing terms.
Outcome residuals() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0, 1);
  double koenigs = 0, siegel_worst = 0, siegel_abs = 0;
  for (const auto& f : family_catalog()) {
    for (int i = 0; i < 20; ++i) {
      const auto lam = std::polar(0.9 * std::sqrt(u(rng)) + 1e-3, 2 * std::numbers::pi * u(rng));
      koenigs = std::max(koenigs, koenigs_residual(koenigs_series<double>(f, lam, 128)).max_scaled);
    }
    const auto rep = siegel_residual(siegel_series<double>(f, RotationNumber::golden().value, 128));
    siegel_worst = std::max(siegel_worst, rep.max_scaled);
    siegel_abs = std::max(siegel_abs, rep.max_abs);
  }
  return {koenigs <= 1e-9 && siegel_worst <= 1e-7,
          fmt("koenigs %.2e (<= 1e-9), siegel golden %.2e (<= 1e-7; unscaled %.2e)", koenigs, siegel_worst, siegel_abs)};
}

// 4. Radial (depth 14) vs coefficient (N = 128) estimators.
Outcome cross_agreement() {
  double worst = 0;
  std::string parts;
  for (const auto& f : {make_quadratic(), make_exp()})
    for (const auto& a : {RotationNumber::golden(), RotationNumber::silver()}) {
      const double r = rho_radial(f, a, {14, default_degree, default_budget, workers}).rho_hat;
      const double c = rho_coefficient(f, a, {128}).rho_hat;
      worst = std::max(worst, std::abs(r - c));
      parts += fmt(" %s/%s:%.3f", f.id().c_str(), a.tag == RotationTag::golden ? "golden" : "silver", r - c);
    }
  return {worst <= 0.05, fmt("max |radial - coeff| = %.4f;%s", worst, parts.c_str())};
}

// 5. Diverging flag by depth 14 at 1/2, 1/3, 2/5.
Outcome rational_collapse() {
  std::string parts;
  bool ok = true;
  for (const auto& [p, q] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 5}}) {
    const auto e = rho_radial(make_quadratic(), RotationNumber::rational(p, q), {14, default_degree, default_budget, workers});
    ok = ok && e.diverging_to_minus_infinity;
    parts += fmt(" %d/%d:%s(last u %.2f)", p, q, e.diverging_to_minus_infinity ? "diverging" : "NOT-diverging", e.rho_hat);
  }
  return {ok, parts.substr(1)};
}

// 6. Mean-value deviation of u within 10x of the log|lambda| oracle.
Outcome harmonicity() {
  const PolarGrid grid;  // 64 x 64 on 0.1 <= |lambda| <= 0.8
  const YoccozEvaluator<double> eval(make_quadratic());
  const auto u = harmonic_check(sample_field(grid, [&](std::complex<double> z) { return eval(z).u; }, workers));
  const auto o = harmonic_check(
      sample_field(grid, [](std::complex<double> z) { return std::log(std::abs(z)); }, workers));
  return {u.masked == 0 && u.max_deviation <= 10 * o.max_deviation,
          fmt("u max dev %.3e, oracle max dev %.3e, h = %.4f, masked %d", u.max_deviation, o.max_deviation, grid.step(),
              u.masked)};
}

// 7. Poisson majorant with flank caps at golden alpha; partition of unity.
Outcome poisson() {
  const auto f = make_quadratic();
  const double a = RotationNumber::golden().value;
  const double delta = 0.01;
  const auto caps = flank_caps(f, a, delta, 16, 0.02);
  const auto rep = poisson_bound_check(f, a, delta, caps.left, caps.right, 14, {default_degree, default_budget, workers});

  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  const StepBoundary step{a, delta, caps.left, caps.right, f.koebe_ceiling()};
  double worst = 0;
  for (int i = 0; i < 1000; ++i)
    worst = std::max(worst, step.partition_error(std::polar(std::sqrt(u(rng)) * (1 - 1e-9), 2 * std::numbers::pi * u(rng))));
  return {rep.violations == 0 && rep.unavailable == 0 && worst <= 1e-12,
          fmt("L=%.3f R=%.3f violations=%d unavailable=%d min margin %.3f; partition error %.1e", caps.left, caps.right,
              rep.violations, rep.unavailable, rep.min_margin, worst)};
}

// 8. Norm axioms on random series and the two hand values.
Outcome norm_suite() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  auto random = [&] {
    TruncatedSeries s(40);
    double scale = 1;
    for (int k = 0; k <= 40; ++k, scale *= 0.5) s[k] = scale * std::complex<double>(u(rng), u(rng));
    return s;
  };
  const double r = 0.3;
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const auto a = random(), b = random(), c = random();
    const double na = qa_norm(a, r).value;
    if (std::abs(qa_norm(2.0 * a, r).value - 2 * na) > 1e-12 * na) ++bad;
    if (qa_distance(a, c, r) > (qa_distance(a, b, r) + qa_distance(b, c, r)) * (1 + 1e-12)) ++bad;
    if (!(na > 0) || qa_distance(a, a, r) != 0) ++bad;
  }
  const double v1 = qa_norm(TruncatedSeries::identity(default_degree), 0.5, 2).value;
  const double v2 = qa_norm(TruncatedSeries::monomial(default_degree, 2), 1.0, 2).value;
  const bool hand = std::abs(v1 - 0.5) <= 1e-9 && std::abs(v2 - 1.0) <= 1e-9;
  return {bad == 0 && hand, fmt("axiom failures %d/300; ||w||_0.5 = %.12f, ||w^2||_1 = %.12f", bad, v1, v2)};
}

// 9. Depth-3 construction certificate, quadratic, golden alpha0, delta 0.1.
Outcome construction() {
  const double r0 = rho_coefficient(make_quadratic(), RotationNumber::golden()).rho_hat;
  ConstructionConfig cfg;
  cfg.depth = 3;
  cfg.delta = 0.1;
  cfg.rho_inf = r0 - 0.6;
  cfg.rho_schedule = {r0 - 0.1, r0 - 0.15, r0 - 0.175};
  cfg.estimator.workers = workers;
  try {
    const auto rep = run_construction(cfg);
    bool ok = rep.completed && rep.steps.size() == 3 && rep.nested_ok;
    std::string deltas;
    double lo = cfg.alpha0.value - cfg.eps0, hi = cfg.alpha0.value + cfg.eps0;
    for (const auto& s : rep.steps) {
      ok = ok && s.norm_delta <= std::ldexp(cfg.delta, -s.n) && std::abs(s.rho_achieved - s.rho_target) <= 0.02 &&
           s.interval_lo >= lo && s.interval_hi <= hi;
      lo = s.interval_lo;
      hi = s.interval_hi;
      deltas += fmt(" %.2e", s.norm_delta);
    }
    ok = ok && rep.final_distance <= 2 * cfg.delta && rep.gprime_min > 0;
    return {ok, fmt("norm deltas%s; final distance %.2e; gprime_min %.3f; alpha_final %.12f", deltas.c_str(),
                    rep.final_distance, rep.gprime_min, rep.alpha_final)};
  } catch (const ConstructionStalled& e) {
    return {false, std::string("stalled: ") + e.what()};
  }
}

// 10. G(omega) = g(omega^{1/2})^2 and rho(reduced, 2 alpha) ~ 2 rho(sin, alpha).
Outcome symmetry() {
  const int n = 128;
  const std::complex<double> lam(0.5, 0.3);
  const auto g = koenigs_series<double>(make_sin(), lam, n).h;
  const auto G = koenigs_series<double>(symmetry_reduce(make_sin()), lam * lam, n / 2).h;
  const auto sq = g * g;
  double formal = 0;
  for (int k = 0; k <= n / 2; ++k) formal = std::max(formal, std::abs(G[k] - sq[2 * k]));

  const auto a = RotationNumber::golden();
  const auto a2 = RotationNumber::from_float(2 * a.value - std::floor(2 * a.value));
  const double rs = rho_coefficient(make_sin(), a).rho_hat;
  const double rr = rho_coefficient(symmetry_reduce(make_sin()), a2).rho_hat;
  return {formal <= 1e-8 && std::abs(rr - 2 * rs) <= 0.1,
          fmt("formal identity error %.2e through degree 64; rho(reduced) %.4f vs 2 rho(sin) %.4f", formal, rr, 2 * rs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 Koebe bound", koebe_bound},
      {"2 v-asymptotic", v_asymptotic},
      {"3 linearization residuals", residuals},
      {"4 estimator cross-agreement", cross_agreement},
      {"5 rational collapse", rational_collapse},
      {"6 harmonicity", harmonicity},
      {"7 Poisson upper bound", poisson},
      {"8 norm suite", norm_suite},
      {"9 construction certificate", construction},
      {"10 symmetry reduction", symmetry},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s: %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", name.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

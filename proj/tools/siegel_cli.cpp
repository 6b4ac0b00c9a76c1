// siegel: command-line front end.
//
// Exit codes: 0 ok, 1 usage, 2 precondition, 3 numerical failure.
// Errors are written to stdout as a JSON object {"error": code, ...}.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "siegel/json_io.hpp"
#include "siegel/parallel.hpp"
#include "siegel/siegel.hpp"

namespace {

using siegel::json;

enum class Precision { double_, extended };

struct RunConfig {
  Precision precision = Precision::double_;
  int degree = siegel::default_degree;
  int depth = 12;
  std::string output_format;  // empty: per-subcommand default
  long seed = 0;
  int workers = 0;  // 0: SIEGEL_WORKERS or hardware
};

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw siegel::PreconditionError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw siegel::PreconditionError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (j.contains("precision_mode")) {
    const auto p = j["precision_mode"].get<std::string>();
    if (p != "double" && p != "extended") throw siegel::PreconditionError("precision_mode must be double or extended");
    cfg.precision = p == "extended" ? Precision::extended : Precision::double_;
  }
  if (j.contains("default_degree")) cfg.degree = j["default_degree"].get<int>();
  if (j.contains("default_depth")) cfg.depth = j["default_depth"].get<int>();
  if (j.contains("output_format")) cfg.output_format = j["output_format"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<long>();
  if (j.contains("worker_count")) cfg.workers = j["worker_count"].get<int>();
}

std::complex<double> parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::logic_error&) {
    throw siegel::PreconditionError("bad complex number '" + text + "', expected RE,IM");
  }
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  try {
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  } catch (const std::logic_error&) {
    throw siegel::PreconditionError("bad number list '" + text + "'");
  }
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw siegel::PreconditionError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const json& j, const std::string& out_path) {
  Output out(out_path);
  out.stream() << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Siegel disc numerics: linearizations, Yoccoz function, conformal radii, constructions"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path, precision = "double", format;
  std::optional<int> workers_flag;
  std::optional<long> seed_flag;
  app.add_option("--config", config_path, "JSON file with RunConfig overrides");
  app.add_option("--precision", precision, "double or extended")->check(CLI::IsMember({"double", "extended"}));
  app.add_option("--seed", seed_flag, "seed for randomized sampling");
  app.add_option("--workers", workers_flag, "worker threads (default SIEGEL_WORKERS or hardware)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string family_name = "quadratic", alpha_text = "golden", out_path;
  int degree = 0;
  long budget = siegel::default_budget;

  // families list
  auto* families = app.add_subcommand("families", "family catalog");
  families->add_subcommand("list", "print the catalog as JSON");
  families->require_subcommand(1);

  // yoccoz
  auto* yoccoz = app.add_subcommand("yoccoz", "evaluate w(lambda) = h_lambda(lambda v)");
  std::string lambda_text;
  yoccoz->add_option("--family", family_name)->required();
  yoccoz->add_option("--lambda", lambda_text, "RE,IM with 0 < |lambda| < 1")->required();
  yoccoz->add_option("--degree", degree);
  yoccoz->add_option("--budget", budget);

  // grid
  auto* grid = app.add_subcommand("grid", "u on a polar grid, CSV r,theta,u,iterations,status");
  double rmin = 0.05, rmax = 0.95;
  int res = 64;
  grid->add_option("--family", family_name)->required();
  grid->add_option("--rmin", rmin);
  grid->add_option("--rmax", rmax);
  grid->add_option("--res", res, "radii and angles per axis");
  grid->add_option("--degree", degree);
  grid->add_option("--budget", budget);
  grid->add_option("--out", out_path);

  // radius
  auto* radius = app.add_subcommand("radius", "estimate rho(alpha)");
  std::string method = "radial";
  int depth = 0;
  radius->add_option("--family", family_name)->required();
  radius->add_option("--alpha", alpha_text)->required();
  radius->add_option("--method", method)->check(CLI::IsMember({"radial", "coeff", "coefficient"}));
  radius->add_option("--depth", depth);
  radius->add_option("--degree", degree);
  radius->add_option("--budget", budget);

  // poisson-check
  auto* poisson = app.add_subcommand("poisson-check", "u <= Poisson majorant along the ray at alpha");
  double delta = 0.05, cap_left = 0, cap_right = 0;
  int ray_samples = 12;
  poisson->add_option("--family", family_name)->required();
  poisson->add_option("--alpha", alpha_text)->required();
  poisson->add_option("--delta", delta);
  poisson->add_option("--L", cap_left)->required();
  poisson->add_option("--R", cap_right)->required();
  poisson->add_option("--samples", ray_samples);
  poisson->add_option("--degree", degree);
  poisson->add_option("--budget", budget);

  // norm
  auto* norm = app.add_subcommand("norm", "quasi-analytic norm of a series");
  std::string series_path;
  double norm_r = 0;
  int norm_k = -1, circle_samples = siegel::default_norm_samples;
  norm->add_option("--series", series_path, "JSON coefficient array [[re,im],...]")->required();
  norm->add_option("--r", norm_r)->required();
  norm->add_option("--K", norm_k);
  norm->add_option("--samples", circle_samples);

  // series
  auto* series = app.add_subcommand("series", "Koenigs (--lambda) or Siegel (--alpha) series as JSON");
  series->add_option("--family", family_name)->required();
  auto* series_lambda = series->add_option("--lambda", lambda_text);
  auto* series_alpha = series->add_option("--alpha", alpha_text);
  series_lambda->excludes(series_alpha);
  series->add_option("--degree", degree);
  series->add_option("--out", out_path);

  // construct
  auto* construct = app.add_subcommand("construct", "finite-depth nested-interval construction");
  siegel::ConstructionConfig ccfg;
  std::string schedule = "auto";
  double rho_inf = 0;
  construct->add_option("--family", family_name)->required();
  construct->add_option("--alpha0", alpha_text)->required();
  construct->add_option("--eps0", ccfg.eps0);
  construct->add_option("--rho-inf", rho_inf)->required();
  construct->add_option("--depth", ccfg.depth);
  construct->add_option("--delta", ccfg.delta);
  construct->add_option("--schedule", schedule, "auto or a comma list rho_1,...,rho_D");
  construct->add_option("--tol-rho", ccfg.tol_rho);
  construct->add_option("--retries", ccfg.retry_budget);
  construct->add_option("--degree", degree);
  construct->add_option("--out", out_path);

  // boundary
  auto* boundary = app.add_subcommand("boundary", "image of |w| = e^rho under g_alpha, CSV theta,re,im,abs_gprime");
  double rho = 0;
  int boundary_samples = 256;
  boundary->add_option("--family", family_name)->required();
  boundary->add_option("--alpha", alpha_text)->required();
  boundary->add_option("--rho", rho)->required();
  boundary->add_option("--samples", boundary_samples);
  boundary->add_option("--degree", degree);
  boundary->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (app.count("--precision")) cfg.precision = precision == "extended" ? Precision::extended : Precision::double_;
    if (seed_flag) cfg.seed = *seed_flag;
    if (!format.empty()) cfg.output_format = format;
    if (std::getenv("SIEGEL_WORKERS") && !workers_flag) cfg.workers = siegel::default_worker_count();
    if (workers_flag) cfg.workers = *workers_flag;
    if (cfg.workers <= 0) cfg.workers = siegel::default_worker_count();
    if (degree > 0) cfg.degree = degree;
    if (depth > 0) cfg.depth = depth;
    const bool extended = cfg.precision == Precision::extended;

    if (families->parsed()) {
      json arr = json::array();
      for (const auto& f : siegel::family_catalog()) arr.push_back(f);
      emit_json(arr, "");
      return 0;
    }

    const auto family = siegel::family_by_name(family_name);

    if (yoccoz->parsed()) {
      const auto lambda = parse_complex(lambda_text);
      json j;
      if (extended) {
        const auto y = siegel::yoccoz_w<long double>(family, {lambda.real(), lambda.imag()}, cfg.degree, budget);
        siegel::YoccozValue<double> d{std::complex<double>(y.lambda), std::complex<double>(y.w),
                                      static_cast<double>(y.u), y.iterations,
                                      static_cast<double>(y.entry_radius), y.koebe_ok};
        j = d;
      } else {
        j = siegel::yoccoz_w<double>(family, lambda, cfg.degree, budget);
      }
      emit_json(j, "");
      return 0;
    }

    if (grid->parsed()) {
      if (!(0 < rmin && rmin < rmax && rmax < 1) || res < 1)
        throw siegel::PreconditionError("grid needs 0 < rmin < rmax < 1 and res >= 1");
      const siegel::YoccozEvaluator<double> eval(family, cfg.degree, budget);
      const auto n = static_cast<std::size_t>(res) * static_cast<std::size_t>(res);
      struct Row {
        double r, theta, u;
        long iterations;
        std::string status;
      };
      const auto rows = siegel::parallel_map(n, cfg.workers, [&](std::size_t idx) {
        const int i = static_cast<int>(idx / static_cast<std::size_t>(res));
        const int j = static_cast<int>(idx % static_cast<std::size_t>(res));
        Row row{res == 1 ? rmin : rmin + (rmax - rmin) * i / (res - 1), 2 * std::numbers::pi * j / res,
                std::nan(""), 0, "ok"};
        try {
          const auto y = eval(std::polar(row.r, row.theta));
          row.u = y.u;
          row.iterations = y.iterations;
        } catch (const siegel::NoConvergence& e) {
          row.status = "budget_exhausted";
          row.iterations = e.iterations();
        } catch (const siegel::Error& e) {
          row.status = e.code();
        }
        return row;
      });
      Output out(out_path);
      if (cfg.output_format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
          arr.push_back({{"r", r.r}, {"theta", r.theta}, {"u", siegel::num(r.u)}, {"iterations", r.iterations},
                         {"status", r.status}});
        out.stream() << arr.dump(2) << '\n';
      } else {
        auto& os = out.stream();
        os << "r,theta,u,iterations,status\n";
        os.precision(17);
        for (const auto& r : rows) {
          os << r.r << ',' << r.theta << ',';
          if (r.status == "ok") os << r.u;
          os << ',' << r.iterations << ',' << r.status << '\n';
        }
      }
      return 0;
    }

    if (radius->parsed()) {
      const auto alpha = siegel::parse_rotation(alpha_text);
      siegel::RadiusEstimate est;
      if (method == "radial") {
        const siegel::RadialOptions opt{cfg.depth, cfg.degree, budget, cfg.workers};
        est = extended ? siegel::rho_radial<long double>(family, alpha, opt) : siegel::rho_radial(family, alpha, opt);
      } else {
        est = siegel::rho_coefficient(family, alpha, {cfg.degree});
      }
      emit_json(est, "");
      return 0;
    }

    if (poisson->parsed()) {
      const auto alpha = siegel::parse_rotation(alpha_text);
      const auto rep = siegel::poisson_bound_check(family, alpha.value, delta, cap_left, cap_right, ray_samples,
                                                   {cfg.degree, budget, cfg.workers});
      emit_json(rep, "");
      return 0;
    }

    if (norm->parsed()) {
      std::ifstream in(series_path);
      if (!in) throw siegel::PreconditionError("cannot open series file " + series_path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw siegel::PreconditionError(std::string("series file is not valid JSON: ") + e.what());
      }
      emit_json(siegel::qa_norm(siegel::series_from_json(j), norm_r, norm_k, circle_samples), "");
      return 0;
    }

    if (series->parsed()) {
      json j;
      if (series_lambda->count()) {
        const auto ks = siegel::koenigs_series<double>(family, parse_complex(lambda_text), cfg.degree);
        j = {{"family", family.id()}, {"lambda", siegel::cplx(ks.lambda)}, {"coeffs", siegel::series_to_json(ks.h)}};
      } else {
        const auto alpha = siegel::parse_rotation(alpha_text);
        const auto ss = siegel::siegel_series<double>(family, alpha.value, cfg.degree);
        j = {{"family", family.id()},
             {"alpha", alpha},
             {"divisor_floor", ss.divisor_floor},
             {"divisor_floor_k", ss.divisor_floor_k},
             {"coeffs", siegel::series_to_json(ss.g)}};
      }
      emit_json(j, out_path);
      return 0;
    }

    if (construct->parsed()) {
      ccfg.family = family;
      ccfg.alpha0 = siegel::parse_rotation(alpha_text);
      ccfg.rho_inf = rho_inf;
      ccfg.estimator.degree = cfg.degree;
      ccfg.estimator.budget = budget;
      ccfg.estimator.workers = cfg.workers;
      if (schedule != "auto") ccfg.rho_schedule = parse_list(schedule);
      emit_json(siegel::run_construction(ccfg), out_path);
      return 0;
    }

    if (boundary->parsed()) {
      const auto alpha = siegel::parse_rotation(alpha_text);
      const auto rep =
          siegel::boundary_report(family, alpha, rho, boundary_samples, degree > 0 ? degree : siegel::boundary_degree);
      Output out(out_path);
      if (cfg.output_format == "json") {
        out.stream() << json{{"radius", rep.radius},
                             {"curve", rep.curve},
                             {"gprime_min_circle", rep.gprime_min_circle},
                             {"gprime_max_circle", rep.gprime_max_circle},
                             {"gprime_min_disc", rep.gprime_min_disc},
                             {"gprime_max_disc", rep.gprime_max_disc},
                             {"self_intersections", rep.self_intersections}}
                            .dump(2)
                     << '\n';
      } else {
        auto& os = out.stream();
        os << "theta,re,im,abs_gprime\n";
        os.precision(17);
        for (const auto& p : rep.curve)
          os << p.theta << ',' << p.z.real() << ',' << p.z.imag() << ',' << p.abs_gprime << '\n';
      }
      return 0;
    }
  } catch (const siegel::Error& e) {
    std::cout << siegel::error_to_json(e).dump(2) << '\n';
    return e.kind() == siegel::ErrorKind::precondition ? 2 : 3;
  } catch (const json::exception& e) {
    std::cout << json{{"error", "precondition"}, {"kind", "precondition"}, {"message", e.what()}}.dump(2) << '\n';
    return 2;
  }
  return 1;
}

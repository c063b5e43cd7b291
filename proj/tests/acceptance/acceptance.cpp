// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cdcheck/coefficients.hpp"
#include "cdcheck/params.hpp"
#include "cdcheck/taylor.hpp"
#include "config.hpp"
#include "runner.hpp"
#include "suites.hpp"

namespace fs = std::filesystem;
using namespace cdcheck;

namespace {

const fs::path kConfigDir = CDCHECK_CONFIG_DIR;
constexpr double kInf = std::numeric_limits<double>::infinity();

fs::path scratch() {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / ("cdcheck_acceptance_" + std::to_string(counter++));
  fs::remove_all(dir);
  return dir;
}

tools::SuiteOutput run_config(const std::string& name) {
  const fs::path path = kConfigDir / name;
  tools::Overrides o;
  o.out_dir = scratch().string();
  return tools::run_suites(tools::resolve(tools::load_config(path), kConfigDir, o));
}

// Smallest min_margin over non-vacuous reports whose name satisfies `keep`;
// counts the vacuous ones.
struct Summary {
  double worst = kInf;
  std::size_t reports = 0, samples = 0, vacuous = 0;
};

Summary summarize(const std::vector<CheckReport>& reports, const std::function<bool(const std::string&)>& keep) {
  Summary s;
  for (const CheckReport& r : reports) {
    if (!keep(r.name)) continue;
    if (r.verdict == Verdict::kVacuous) {
      ++s.vacuous;
      continue;
    }
    ++s.reports;
    s.samples += r.samples();
    s.worst = std::min(s.worst, r.min_margin);
  }
  return s;
}

auto named(std::set<std::string> names) {
  return [names = std::move(names)](const std::string& n) { return names.count(n) > 0; };
}

struct Outcome {
  bool ok = false;
  std::string metrics;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = o.ok && secs < limit_s;
  if (!ok) ++failures;
  std::printf("criterion %2d %s  %-28s %s  runtime=%.2fs (limit %gs)\n", id, ok ? "PASS" : "FAIL", title,
              o.metrics.c_str(), secs, limit_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome comparison_functions() {
  double worst = 0.0;
  const double h = 1e-3;
  for (double kappa : {1.0, 0.0, -1.0}) {
    for (int i = 1; i <= 1000; ++i) {
      const double s = 10.0 * i / 1000.0;
      const double second = (s_kappa(kappa, s + h) - 2 * s_kappa(kappa, s) + s_kappa(kappa, s - h)) / (h * h);
      const double res = std::abs(second + kappa * s_kappa(kappa, s)) / std::max(1.0, std::abs(s_kappa(kappa, s)));
      worst = std::max(worst, res);
    }
  }
  const bool diam = diam_kappa(4.0) == std::numbers::pi / 2 && diam_kappa(std::numbers::pi * std::numbers::pi) == 1.0 &&
                    diam_kappa(0.0) == kInf && diam_kappa(-1.0) == kInf;
  return {worst < 1e-6 && diam, fmt("max_ode_residual=%.2e (tol 1e-06) diameters_exact=%s", worst, diam ? "yes" : "no")};
}

Outcome reductions() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = std::uniform_int_distribution<int>(2, 8)(rng);
    const double Nbig = std::uniform_real_distribution<double>(n, n + 40.0)(rng);
    const double Nsmall = std::uniform_real_distribution<double>(-20.0, 0.99)(rng);
    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    worst = std::max(worst, rel(validate_params(n, Nbig, 1.0).c, 1.0 / (Nbig - 1.0)));
    worst = std::max(worst, rel(validate_params(n, 1.0, 0.0).c, 1.0 / (n - 1.0)));
    const double eps0 = (Nsmall - 1.0) / (Nsmall - n);
    worst = std::max(worst, rel(validate_params(n, Nsmall, eps0).c, 1.0 / (n - Nsmall)));
  }
  return {worst <= 1e-14, fmt("max_rel_error=%.2e over 20 (n,N) (tol 1e-14)", worst)};
}

Outcome jacobian() {
  std::string m;
  bool ok = true;
  for (const char* cfg : {"sphere_jacobian.json", "weighted_r3_jacobian.json"}) {
    const auto out = run_config(cfg);
    const Summary curv = summarize(out.reports, named({"curvature_bound"}));
    const Summary s = summarize(out.reports, named({"riccati", "jacobian_concavity"}));
    ok = ok && curv.reports == 1 && curv.worst >= -1e-9 && s.reports == 2 && s.vacuous == 0 && s.worst >= -1e-8;
    m += fmt("%s: min_margin=%.2e ", cfg, s.worst);
  }
  return {ok, m + "(tol 1e-08)"};
}

Outcome falsification() {
  const fs::path dir = scratch();
  tools::RunOptions opt;
  opt.config = kConfigDir / "flat_falsify.json";
  opt.overrides.out_dir = dir.string();
  opt.quiet = true;
  std::ostringstream out, err;
  const int code = tools::run(opt, out, err);
  std::ifstream in(dir / "report.json");
  const auto report = nlohmann::json::parse(in);
  double margin = kInf;
  for (const auto& r : report["reports"])
    if (r["name"] == "jacobian_falsification" && r["min_margin"].is_number()) margin = r["min_margin"].get<double>();
  fs::remove_all(dir);
  return {code == tools::kExitViolation && margin < -1e-8,
          fmt("exit_code=%d counterexample_margin=%.3e (10^4 trials)", code, margin)};
}

Outcome twcd() {
  const auto slab = run_config("twcd_slab.json");
  const Summary s = summarize(slab.reports, named({"twcd"}));
  const auto classical = run_config("twcd_classical.json");
  const Summary agree = summarize(classical.reports, named({"classical_agreement"}));
  const bool ok = s.reports == 5 && s.samples == 45 && s.vacuous == 0 && s.worst >= -1e-6 && agree.reports == 2 && agree.vacuous == 0 &&
                  agree.worst >= -1e-9;
  return {ok, fmt("pairs=%zu min_margin=%.2e (tol 1e-06) classical_diff=%.2e (tol 1e-09)", s.reports, s.worst,
                  -agree.worst)};
}

Outcome brunn_minkowski() {
  const Summary balls = summarize(run_config("bm_balls.json").reports, named({"brunn_minkowski"}));
  const Summary intervals = summarize(run_config("bm_intervals.json").reports, named({"brunn_minkowski"}));
  const bool ok = balls.reports == 1 && intervals.reports == 1 && balls.worst >= -1e-10 && intervals.worst >= -1e-6;
  return {ok, fmt("ball_margin=%.2e (tol 1e-10) interval_margin=%.3e (tol 1e-06)", balls.worst, intervals.worst)};
}

Outcome limits() {
  struct Case {
    ModelSpace space;
    WeightFunction weight;
    DimensionParams params;
    double kappa;
    Point x, y;
  };
  const ModelSpace s2 = ModelSpace::sphere(2), h2 = ModelSpace::hyperbolic(2);
  const Point o = Eigen::Vector2d(0, 1);
  const std::vector<Case> cases = {
      {ModelSpace::euclidean(2), WeightFunction::linear(1.0), validate_params(2, 4.0, 0.7), 0.2,
       Eigen::Vector2d(0.1, 0.0), Eigen::Vector2d(1.1, 0.0)},
      {s2, WeightFunction::cosine(0.5), validate_params(2, 6.0, 0.6), 0.3, Eigen::Vector3d(std::sin(1.0), 0, std::cos(1.0)),
       Eigen::Vector3d(std::sin(1.8), 0, std::cos(1.8))},
      {h2, WeightFunction::quadratic(0.4), validate_params(2, -3.0, 0.3), -1.0, o,
       h2.geodesic_point(o, h2.normalize(o, Eigen::Vector2d(1, 0.5)), 0.8)},
  };
  double worst_ext = 0.0, worst_bound = kInf;
  bool ok = true;
  for (const Case& c : cases) {
    const CheckReport r = check_limits(c.space, c.weight, c.params, c.kappa, c.x, c.y, {});
    ok = ok && r.passed();
    worst_ext = std::max({worst_ext, -r.margins[0], -r.margins[1]});
    for (const auto& row : r.details["bound_rows"])
      worst_bound = std::min(worst_bound, row["rhs"].get<double>() - row["lhs"].get<double>());
  }
  ok = ok && worst_ext <= 1e-6 && worst_bound >= -1e-10;
  return {ok, fmt("configs=3 bound_min_margin=%.2e extrapolation_err=%.2e (tol 1e-06)", worst_bound, worst_ext)};
}

Outcome taylor() {
  // Components whose remainder sits at rounding level (exact polynomials)
  // carry no slope; every term needs a fitted slope in some configuration.
  std::set<std::string> terms, fitted_terms;
  double min_slope = kInf, identity = kInf;
  std::size_t identity_points = 0, exact = 0;
  bool ok = true;
  for (const char* cfg : {"taylor_flat.json", "taylor_sphere.json"}) {
    for (const CheckReport& r : run_config(cfg).reports) {
      if (r.name.rfind("taylor_", 0) == 0) {
        ok = ok && r.passed();
        terms.insert(r.name);
        for (const auto& c : r.details["components"]) {
          if (!c["slope"].is_number()) {
            ++exact;
            continue;
          }
          fitted_terms.insert(r.name);
          min_slope = std::min(min_slope, c["slope"].get<double>());
        }
      } else if (r.name == "F_identity") {
        ok = ok && r.passed();
        identity = std::min(identity, r.min_margin);
        identity_points = std::max(identity_points, r.samples());
      }
    }
  }
  ok = ok && terms.size() == 5 && fitted_terms.size() == 5 && min_slope >= kSlopeThreshold && identity_points >= 100;
  return {ok, fmt("terms=%zu min_slope=%.3f (tol 2.8) exact_components=%zu F_identity_min_margin=%.2e over %zu points "
                  "(tol 1e-10)",
                  terms.size(), min_slope, exact, identity, identity_points)};
}

Outcome functional() {
  const auto out = run_config("functional_sphere.json");
  double worst = kInf, at_zero = 0.0;
  std::size_t count = 0, k_hwi = 0, k_tei = 0;
  for (const CheckReport& r : out.reports) {
    const bool hwi = r.name == "hwi_lsi", tei = r.name == "transport_energy";
    if (!hwi && !tei) continue;
    if (r.verdict == Verdict::kVacuous) return {false, "vacuous " + r.name};
    ++count;
    worst = std::min(worst, r.min_margin);
    if ((hwi && k_hwi == 0) || (tei && k_tei == 0))
      for (double m : r.margins) at_zero = std::max(at_zero, std::abs(m));
    (hwi ? k_hwi : k_tei)++;
  }
  const bool ok = count == 6 && worst >= -1e-5 && at_zero < 1e-9;
  return {ok, fmt("min_margin=%.2e (tol 1e-05) max|margin| at a=0: %.2e (tol 1e-09)", worst, at_zero)};
}

Outcome determinism() {
  bool ok = true;
  std::string m;
  for (const char* cfg : {"sphere_jacobian.json", "twcd_classical.json", "taylor_sphere.json", "bm_intervals.json"}) {
    std::string hashes[2];
    for (auto& hash : hashes) {
      const fs::path dir = scratch();
      tools::RunOptions opt;
      opt.config = kConfigDir / cfg;
      opt.overrides.out_dir = dir.string();
      opt.quiet = true;
      std::ostringstream out, err;
      tools::run(opt, out, err);
      std::ifstream in(dir / "report.json");
      hash = nlohmann::json::parse(in)["report_hash"].get<std::string>();
      fs::remove_all(dir);
    }
    ok = ok && hashes[0] == hashes[1];
    m += std::string(cfg) + (hashes[0] == hashes[1] ? " same " : " DIFFERENT ");
  }
  return {ok, m};
}

}  // namespace

int main() {
  criterion(1, "comparison functions", 1, comparison_functions);
  criterion(2, "eps-range reductions", 1, reductions);
  criterion(3, "jacobian suite", 60, jacobian);
  criterion(4, "falsification", 60, falsification);
  criterion(5, "twisted displacement conv.", 120, twcd);
  criterion(6, "brunn-minkowski", 10, brunn_minkowski);
  criterion(7, "limits", 30, limits);
  criterion(8, "taylor", 30, taylor);
  criterion(9, "functional inequalities", 120, functional);
  criterion(10, "determinism", 600, determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

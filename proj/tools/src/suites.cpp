#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "cdcheck/coefficients.hpp"
#include "cdcheck/curvature.hpp"
#include "cdcheck/density.hpp"
#include "cdcheck/errors.hpp"
#include "cdcheck/inequalities.hpp"
#include "cdcheck/jacobi.hpp"
#include "cdcheck/numerics.hpp"
#include "cdcheck/taylor.hpp"

namespace cdcheck::tools {

using nlohmann::json;

namespace {

using AxisPtr = std::shared_ptr<const AxisMeasure>;

std::function<double(double)> profile_function(const json& d) {
  const std::string profile = d.at("profile");
  if (profile == "gaussian") {
    const double mu = d["mean"], sd = d["sd"];
    return [mu, sd](double s) { return std::exp(-0.5 * (s - mu) * (s - mu) / (sd * sd)); };
  }
  if (profile == "cosine") {
    const double a = d["amplitude"], k = d["frequency"];
    return [a, k](double s) { return 1.0 + a * std::cos(k * s); };
  }
  return [](double) { return 1.0; };
}

DensityField read_density_csv(const json& d, const AxisPtr& axis, const std::filesystem::path& base) {
  const std::filesystem::path p = base / d["path"].get<std::string>();
  std::ifstream in(p);
  if (!in) throw ConfigError("cannot read density file " + p.string());
  return DensityField::read_csv(in, axis);
}

// Probability density with respect to the reference measure.
DensityField make_density(const json& d, const AxisPtr& axis, int log2_cells, const std::filesystem::path& base) {
  if (d["profile"] == "csv") return read_density_csv(d, axis, base).normalized();
  return DensityField::from_function(axis, d["lo"], d["hi"], profile_function(d), log2_cells);
}

// Sampled as given, without normalization.
DensityField make_function(const json& d, const AxisPtr& axis, int log2_cells, const std::filesystem::path& base) {
  if (d["profile"] == "csv") return read_density_csv(d, axis, base);
  const std::size_t count = (std::size_t{1} << log2_cells) + 1;
  const std::vector<double> xs = linspace(d["lo"], d["hi"], count);
  std::vector<double> vals(count);
  const auto fn = profile_function(d);
  std::transform(xs.begin(), xs.end(), vals.begin(), fn);
  return DensityField(axis, d["lo"], d["hi"], std::move(vals));
}

Region box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) { return Region{lo, hi}; }

Region slab_region(int n, double lo, double hi) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b = Eigen::VectorXd::Ones(n);
  a(0) = lo;
  b(0) = hi;
  return box(a, b);
}

Region config_region(const Setting& s, const Region& fallback) {
  if (!s.has("region")) return fallback;
  return box(to_point(s.block("region")["lo"]), to_point(s.block("region")["hi"]));
}

CheckReport curvature_on(const Setting& s, const Region& region) {
  CurvatureSampling cs;
  cs.count = s.trials;
  cs.seed = s.seed;
  cs.region = region;
  return check_curvature_bound(s.space, s.weight, s.params, s.kappa, cs);
}

std::string region_text(const Region& r) {
  if (r.empty()) return "the whole space";
  const Eigen::IOFormat fmt(Eigen::StreamPrecision, Eigen::DontAlignCols, ", ", ", ", "", "", "[", "]");
  std::ostringstream os;
  os << "the box " << r.lo.transpose().format(fmt) << " to " << r.hi.transpose().format(fmt);
  return os.str();
}

CheckReport unmet(const std::string& name, const std::string& why, const CheckReport& hypothesis) {
  CheckReport r = vacuous_report(name, why);
  r.details["hypothesis"] = hypothesis.name;
  r.details["hypothesis_min_margin"] = hypothesis.min_margin;
  return r;
}

void add_csv(SuiteOutput& out, std::string file, const std::function<void(std::ostream&)>& write) {
  std::ostringstream os;
  write(os);
  out.artifacts.push_back({std::move(file), os.str()});
}

void run_curvature(const Setting& s, SuiteOutput& out) {
  out.reports.push_back(curvature_on(s, config_region(s, {})));
}

void run_jacobian(const Setting& s, SuiteOutput& out) {
  const json& j = s.block("jacobian");
  RaySampling rs;
  rs.count = s.trials;
  rs.seed = s.seed;
  rs.region = j.contains("ray_region") ? box(to_point(j["ray_region"]["lo"]), to_point(j["ray_region"]["hi"]))
                                       : config_region(s, {});
  rs.speed_lo = j["speed_lo"];
  rs.speed_hi = j["speed_hi"];
  rs.steps = j["steps"];
  rs.det_floor = j["det_floor"];

  const CheckReport curvature = curvature_on(s, config_region(s, {}));
  std::size_t trial = 0;
  if (curvature.passed()) {
    JacobianSuiteResult res = run_jacobian_suite(s.space, s.weight, s.params, s.kappa, rs);
    out.reports.push_back(curvature);
    out.reports.push_back(std::move(res.riccati));
    out.reports.push_back(std::move(res.concavity));
    trial = res.worst_ray;
  } else {
    CheckReport r = falsify_jacobian(s.space, s.weight, s.params, s.kappa, rs);
    if (r.details.contains("counterexample")) trial = r.details["counterexample"]["trial"];
    out.reports.push_back(std::move(r));
  }
  auto rng = sample_rng(s.seed, trial);
  const JacobianTrajectory tr = sample_admissible_ray(s.space, s.weight, s.params, s.kappa, rng, rs);
  add_csv(out, "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, tr); });
}

void run_twcd(const Setting& s, SuiteOutput& out) {
  const json& t = s.block("twcd");
  const AxisPtr axis = AxisMeasure::make(s.space, s.weight);
  const int cells = t["log2_cells"];
  std::vector<std::pair<DensityField, DensityField>> pairs;
  double lo = INFINITY, hi = -INFINITY;
  for (const json& p : t["pairs"]) {
    pairs.emplace_back(make_density(p["rho0"], axis, cells, s.base_dir), make_density(p["rho1"], axis, cells, s.base_dir));
    lo = std::min({lo, pairs.back().first.lo(), pairs.back().second.lo()});
    hi = std::max({hi, pairs.back().first.hi(), pairs.back().second.hi()});
  }
  const Region region = config_region(s, axis->kind() == AxisKind::kSlab ? slab_region(s.params.n, lo, hi) : Region{});
  const CheckReport curvature = curvature_on(s, region);
  const EntropyFunctional U = EntropyFunctional::parse(t["functional"], s.params);
  const CheckReport dc = dc_membership(U.U, s.params);
  const bool classical = t["classical"];

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [rho0, rho1] = pairs[k];
    if (!curvature.passed() || !dc.passed()) {
      const CheckReport& h = curvature.passed() ? dc : curvature;
      CheckReport r = unmet("twcd", h.name + " fails on " + region_text(region), h);
      r.details["pair"] = k;
      out.reports.push_back(std::move(r));
      continue;
    }
    CheckReport r = check_twcd(rho0, rho1, s.params, s.kappa, U, s.t_grid, s.tolerance("twcd"));
    r.details["pair"] = k;
    add_csv(out, "twcd_pair" + std::to_string(k) + ".csv", [&](std::ostream& os) { write_twcd_csv(os, r); });
    if (classical) {
      CheckReport c = check_classical_renyi(rho0, rho1, s.params.N.value(), s.kappa, s.t_grid,
                                            s.tolerance("classical_renyi"));
      c.details["pair"] = k;
      std::vector<double> diffs;
      for (std::size_t i = 0; i < s.t_grid.size(); ++i) {
        diffs.push_back(-std::abs(r.details["lhs"][i].get<double>() - c.details["lhs"][i].get<double>()));
        diffs.push_back(-std::abs(r.details["rhs"][i].get<double>() - c.details["rhs"][i].get<double>()));
      }
      CheckReport a = make_report("classical_agreement", std::move(diffs), s.tolerance("classical_agreement"));
      a.details["pair"] = k;
      a.note = "margins alternate -|lhs difference|, -|rhs difference| per t";
      out.reports.push_back(std::move(r));
      out.reports.push_back(std::move(c));
      out.reports.push_back(std::move(a));
    } else {
      out.reports.push_back(std::move(r));
    }
  }
  if (curvature.passed()) out.reports.push_back(curvature);
  out.reports.push_back(dc);
}

void run_bm(const Setting& s, SuiteOutput& out) {
  const json& b = s.block("bm");
  auto make_set = [](const json& j) {
    if (j.contains("ball")) return BmSet::ball(to_point(j["ball"]["center"]), j["ball"]["radius"]);
    return BmSet::interval(j["interval"][0], j["interval"][1]);
  };
  RegionPair rp{make_set(b["X"]), make_set(b["Y"]), b["t"]};
  Region auto_region;
  if (rp.X.shape == SetShape::kBall && s.space.kind() != SpaceKind::kSphere) {
    const Eigen::VectorXd lo = (rp.X.center.array() - rp.X.radius).min(rp.Y.center.array() - rp.Y.radius);
    const Eigen::VectorXd hi = (rp.X.center.array() + rp.X.radius).max(rp.Y.center.array() + rp.Y.radius);
    auto_region = box(lo, hi);
  } else if (rp.X.shape == SetShape::kInterval && s.space.kind() == SpaceKind::kEuclidean) {
    auto_region = slab_region(s.params.n, std::min(rp.X.lo, rp.Y.lo), std::max(rp.X.hi, rp.Y.hi));
  }
  const Region region = config_region(s, auto_region);
  const CheckReport curvature = curvature_on(s, region);
  if (!curvature.passed()) {
    out.reports.push_back(unmet("brunn_minkowski", "curvature bound fails on " + region_text(region), curvature));
    return;
  }
  BmOptions opts;
  opts.grid = b["grid"];
  opts.tolerance = s.tolerance("brunn_minkowski");
  out.reports.push_back(curvature);
  out.reports.push_back(check_brunn_minkowski(rp, s.space, s.weight, s.params, s.kappa, opts));
}

void run_interpolation(const Setting& s, SuiteOutput& out) {
  const json& ip = s.block("interpolation");
  const AxisPtr axis = AxisMeasure::make(s.space, s.weight);
  const int cells = ip["log2_cells"];
  const DensityField psi0 = make_function(ip["psi0"], axis, cells, s.base_dir);
  const DensityField psi1 = make_function(ip["psi1"], axis, cells, s.base_dir);
  std::optional<DensityField> psi;
  if (ip.contains("psi")) psi = make_function(ip["psi"], axis, cells, s.base_dir);
  const Region region =
      config_region(s, slab_region(s.params.n, std::min(psi0.lo(), psi1.lo()), std::max(psi0.hi(), psi1.hi())));
  const CheckReport curvature = curvature_on(s, region);
  if (!curvature.passed()) {
    out.reports.push_back(unmet("interpolation", "curvature bound fails on " + region_text(region), curvature));
    return;
  }
  InterpolationOptions opts;
  opts.hypothesis_samples = ip["hypothesis_samples"];
  opts.seed = s.seed;
  opts.log2_cells = cells;
  opts.tolerance = s.tolerance("interpolation");
  out.reports.push_back(curvature);
  out.reports.push_back(check_interpolation(psi0, psi1, psi ? &*psi : nullptr, ip["t"], ip["p"], s.params, s.kappa, opts));
}

void run_functional(const Setting& s, SuiteOutput& out) {
  const json& f = s.block("functional");
  const AxisPtr axis = AxisMeasure::make(s.space, s.weight);
  const double delta = f["delta"];
  for (std::size_t k = 0; k < f["densities"].size(); ++k) {
    const DensityField rho = make_density(f["densities"][k], axis, f["log2_cells"], s.base_dir);
    CheckReport h = check_hwi_lsi(rho, s.params, s.kappa, delta, s.tolerance("hwi_lsi"));
    CheckReport t = check_transport_energy(rho, s.params, s.kappa, s.tolerance("transport_energy"));
    h.details["density"] = k;
    t.details["density"] = k;
    out.reports.push_back(std::move(h));
    out.reports.push_back(std::move(t));
  }
  out.reports.push_back(check_young_inequality());
}

void run_taylor(const Setting& s, SuiteOutput& out) {
  const json& t = s.block("taylor");
  const Point x = to_point(t["x"]);
  const Tangent v = to_point(t["v"]);
  const std::vector<double> deltas = t["deltas"];
  std::vector<std::string> listed = t["terms"];
  for (const std::string& id : listed) {
    SeriesCheck sc = check_series(s.space, s.weight, s.params, s.kappa, x, v, parse_series_term(id), deltas);
    for (const SeriesComponent& comp : sc.components) {
      add_csv(out, "taylor_" + comp.id + ".csv", [&](std::ostream& os) { write_series_csv(os, comp); });
    }
    out.reports.push_back(std::move(sc.report));
  }
  for (SeriesTerm term : {SeriesTerm::kApp4, SeriesTerm::kApp6}) {
    if (std::find(listed.begin(), listed.end(), to_string(term)) == listed.end()) {
      out.reports.push_back(vacuous_report(std::string("taylor_") + to_string(term),
                                           "theta_eps is undefined for these parameters"));
    }
  }
  const double g = t["gradf_v"];
  const int points = t["theta_points"];
  if (!std::isfinite(s.params.eps0) || s.params.eps0 == 0.0) {
    out.reports.push_back(vacuous_report("F_identity", "needs a finite, nonzero eps0"));
  } else {
    out.reports.push_back(check_F_identity(s.params, g, linspace(-2.0, 2.0, static_cast<std::size_t>(points))));
  }
}

void run_limits(const Setting& s, SuiteOutput& out) {
  const json& l = s.block("limits");
  const Point x = to_point(l["x"]);
  const Point y = to_point(l["y"]);
  LimitOptions opts;
  opts.extrapolation_tol = s.tolerance("limits");
  opts.bound_t = l["bound_t"];
  opts.halvings = l["halvings"];
  opts.seed = s.seed;
  out.reports.push_back(check_limits(s.space, s.weight, s.params, s.kappa, x, y, opts));
  const GeodesicSegment seg = s.space.log_map(x, y);
  if (seg.degenerate) {
    out.reports.push_back(vacuous_report("limit_bound", "x = y"));
    return;
  }
  out.reports.push_back(check_limit_bound(s.space, s.weight, s.params, opts.bound_t, x, seg.direction, seg.length,
                                          opts.halvings, s.seed));
}

}  // namespace

SuiteOutput run_suites(const Setting& s) {
  static const std::map<std::string, void (*)(const Setting&, SuiteOutput&)> table = {
      {"curvature", run_curvature}, {"jacobian", run_jacobian},       {"twcd", run_twcd},
      {"bm", run_bm},               {"interpolation", run_interpolation}, {"functional", run_functional},
      {"taylor", run_taylor},       {"limits", run_limits},
  };
  SuiteOutput out;
  for (const std::string& suite : s.suites()) table.at(suite)(s, out);

  const std::string provenance = "config:" + config_hash(s.config) + " seed:" + std::to_string(s.seed);
  for (CheckReport& r : out.reports) {
    r.seed = s.seed;
    r.provenance = provenance;
    if (r.verdict != Verdict::kVacuous) {
      r.tolerance = s.tolerance(r.name);
      finalize(r);
    }
  }
  if (!s.config.at("output").at("csv").get<bool>()) out.artifacts.clear();
  return out;
}

}  // namespace cdcheck::tools

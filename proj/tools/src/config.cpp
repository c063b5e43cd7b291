#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>
#include <rapidjson/schema.h>
#include <rapidjson/stringbuffer.h>

#include "cdcheck/density.hpp"
#include "cdcheck/errors.hpp"
#include "cdcheck/inequalities.hpp"
#include "cdcheck/numerics.hpp"
#include "cdcheck/taylor.hpp"

namespace cdcheck::tools {

using nlohmann::json;

namespace {

const rapidjson::SchemaDocument& schema_document() {
  static const rapidjson::SchemaDocument doc = [] {
    rapidjson::Document d;
    d.Parse(kConfigSchema);
    if (d.HasParseError()) throw std::logic_error("embedded config schema is not valid JSON");
    return rapidjson::SchemaDocument(d);
  }();
  return doc;
}

// RapidJSON reports the object that carries an unknown key, not the key.
std::string unknown_keys(const std::string& text, const std::string& doc_ptr, const std::string& schema_ptr) {
  const json doc = json::parse(text);
  const json schema = json::parse(kConfigSchema);
  const json& obj = doc.at(json::json_pointer(doc_ptr));
  const json& props = schema.at(json::json_pointer(schema_ptr)).value("properties", json::object());
  std::string out;
  for (const auto& [key, _] : obj.items()) {
    if (!props.contains(key)) out += (out.empty() ? "" : ", ") + key;
  }
  return out;
}

std::vector<double> as_vector(const json& v) { return v.get<std::vector<double>>(); }

Eigen::VectorXd as_eigen(const json& v) {
  const std::vector<double> xs = as_vector(v);
  return Eigen::Map<const Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
}

json from_eigen(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void require_size(const json& v, int size, const std::string& where) {
  if (static_cast<int>(v.size()) != size) {
    throw ConfigError(where + " must have " + std::to_string(size) + " coordinates, got " +
                      std::to_string(v.size()));
  }
}

template <class T>
void set_default(json& obj, const char* key, const T& value) {
  if (!obj.contains(key)) obj[key] = value;
}

json resolve_density(json d, const AxisMeasure& axis, const std::string& where) {
  const std::string profile = d.at("profile");
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"uniform", {"profile", "lo", "hi"}},
      {"gaussian", {"profile", "lo", "hi", "mean", "sd"}},
      {"cosine", {"profile", "lo", "hi", "amplitude", "frequency"}},
      {"csv", {"profile", "path"}},
  };
  for (const auto& [key, _] : d.items()) {
    if (!allowed.at(profile).count(key)) {
      throw ConfigError(where + "." + key + " does not apply to profile '" + profile + "'");
    }
  }
  if (profile == "csv") {
    if (!d.contains("path")) throw ConfigError(where + ".path is required for profile 'csv'");
    return d;
  }
  const bool finite_axis = std::isfinite(axis.axis_lo()) && std::isfinite(axis.axis_hi());
  if (!d.contains("lo") || !d.contains("hi")) {
    if (!finite_axis) throw ConfigError(where + " needs lo and hi on an unbounded axis");
    set_default(d, "lo", axis.axis_lo());
    set_default(d, "hi", axis.axis_hi());
  }
  const double lo = d["lo"], hi = d["hi"];
  if (!(lo < hi)) throw ConfigError(where + " needs lo < hi");
  if (lo < axis.axis_lo() || hi > axis.axis_hi()) {
    throw ConfigError(where + " leaves the axis [" + std::to_string(axis.axis_lo()) + ", " +
                      std::to_string(axis.axis_hi()) + "]");
  }
  if (profile == "gaussian") {
    set_default(d, "mean", 0.5 * (lo + hi));
    set_default(d, "sd", (hi - lo) / 6.0);
  } else if (profile == "cosine") {
    set_default(d, "amplitude", 0.0);
    set_default(d, "frequency", axis.kind() == AxisKind::kZonal ? 1.0 / axis.space().scale() : 1.0);
  }
  return d;
}

json resolve_set(const json& s, const ModelSpace& space, const std::string& where) {
  if (s.contains("ball") == s.contains("interval")) {
    throw ConfigError(where + " must be exactly one of ball or interval");
  }
  if (s.contains("ball")) require_size(s["ball"]["center"], space.ambient_dim(), where + ".ball.center");
  if (s.contains("interval") && !(s["interval"][0].get<double>() < s["interval"][1].get<double>())) {
    throw ConfigError(where + ".interval needs lo < hi");
  }
  return s;
}

struct Probe {
  Point x;
  Tangent v;
};

Probe default_probe(const ModelSpace& space) {
  const int d = space.dim();
  Probe p;
  switch (space.kind()) {
    case SpaceKind::kEuclidean:
      p.x = Point::Constant(d, 0.2);
      p.v = Tangent::Zero(d);
      p.v(0) = 1.0;
      if (d > 1) p.v(1) = 0.5;
      break;
    case SpaceKind::kSphere:
      p.x = Point::Zero(d + 1);
      p.x(0) = std::sin(1.0);
      p.x(d) = std::cos(1.0);
      p.v = Tangent::Zero(d + 1);
      p.v(0) = std::cos(1.0);
      p.v(1) = 0.3;
      p.v(d) = -std::sin(1.0);
      break;
    case SpaceKind::kHyperbolic:
      p.x = Point::Constant(d, 0.3);
      p.x(d - 1) = 1.2;
      p.v = Tangent::Constant(d, 0.5);
      p.v(d - 1) = 1.0;
      break;
  }
  return p;
}

Probe resolve_probe(json& blk, const ModelSpace& space, const std::string& where) {
  const Probe def = default_probe(space);
  set_default(blk, "x", from_eigen(def.x));
  require_size(blk["x"], space.ambient_dim(), where + ".x");
  Probe p;
  p.x = space.canonical(as_eigen(blk["x"]));
  if (!space.contains(p.x, 1e-9)) throw ConfigError(where + ".x is not a point of " + space.describe());
  blk["x"] = from_eigen(p.x);
  return p;
}

Tangent resolve_direction(json& blk, const ModelSpace& space, const Point& x, const std::string& where) {
  set_default(blk, "v", from_eigen(default_probe(space).v));
  require_size(blk["v"], space.ambient_dim(), where + ".v");
  Tangent v = space.project(x, as_eigen(blk["v"]));
  if (!(space.norm(x, v) > 1e-12)) throw ConfigError(where + ".v must be a nonzero tangent vector");
  v = space.normalize(x, v);
  blk["v"] = from_eigen(v);
  return v;
}

const std::vector<std::string> kSuiteOrder = {"curvature", "jacobian", "twcd",   "bm",
                                              "interpolation", "functional", "taylor", "limits"};

const std::map<std::string, std::vector<std::string>> kSuiteReports = {
    {"curvature", {"curvature_bound"}},
    {"jacobian", {"curvature_bound", "riccati", "jacobian_concavity", "jacobian_falsification"}},
    {"twcd", {"curvature_bound", "twcd", "classical_renyi", "classical_agreement", "dc_membership"}},
    {"bm", {"curvature_bound", "brunn_minkowski"}},
    {"interpolation", {"curvature_bound", "interpolation"}},
    {"functional", {"hwi_lsi", "transport_energy", "young"}},
    {"taylor", {"taylor", "F_identity"}},
    {"limits", {"limits", "limit_bound"}},
};

double default_tolerance(const std::string& name, const json& cfg) {
  static const std::map<std::string, double> fixed = {
      {"curvature_bound", 1e-9}, {"riccati", 1e-8},          {"jacobian_concavity", 1e-8},
      {"jacobian_falsification", 1e-8}, {"twcd", 1e-6},      {"classical_renyi", 1e-6},
      {"classical_agreement", 1e-9},    {"dc_membership", 1e-8}, {"interpolation", 1e-6},
      {"hwi_lsi", 1e-5},                {"transport_energy", 1e-5}, {"young", 1e-12},
      {"taylor", 0.0},                  {"F_identity", 1e-10}, {"limits", 1e-6},
      {"limit_bound", 1e-10},
  };
  if (name == "brunn_minkowski") return cfg.at("bm").at("X").contains("ball") ? 1e-10 : 1e-6;
  return fixed.at(name);
}

}  // namespace

json parse_config(const std::string& text) {
  rapidjson::Document doc;
  doc.Parse(text.c_str(), text.size());
  if (doc.HasParseError()) {
    throw ConfigError(std::string("config is not valid JSON: ") + rapidjson::GetParseError_En(doc.GetParseError()) +
                      " (offset " + std::to_string(doc.GetErrorOffset()) + ")");
  }
  rapidjson::SchemaValidator validator(schema_document());
  if (!doc.Accept(validator)) {
    rapidjson::StringBuffer where, schema_where;
    validator.GetInvalidDocumentPointer().Stringify(where);
    validator.GetInvalidSchemaPointer().Stringify(schema_where);
    const std::string keyword = validator.GetInvalidSchemaKeyword();
    std::string msg = std::string("config fails schema at '") + where.GetString() + "': keyword '" + keyword + "'";
    if (keyword == "additionalProperties") {
      msg += ", unknown field(s): " + unknown_keys(text, where.GetString(), schema_where.GetString());
    }
    throw ConfigError(msg);
  }
  return json::parse(text);
}

json load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

Point to_point(const json& v) { return as_eigen(v); }

std::vector<std::string> Setting::suites() const {
  if (suite() != "all") return {suite()};
  std::vector<std::string> out;
  for (const std::string& s : kSuiteOrder) {
    if (s == "curvature" || s == "jacobian" || s == "taylor" || s == "limits" || has(s)) out.push_back(s);
  }
  return out;
}

double Setting::tolerance(const std::string& report_name) const {
  const std::string key = report_name.rfind("taylor_", 0) == 0 ? "taylor" : report_name;
  const json& tol = config.at("tolerances");
  if (tol.contains(key)) return tol[key].get<double>();
  return default_tolerance(key, config);
}

Setting resolve(const json& input, const std::filesystem::path& base_dir, const Overrides& overrides) {
  json cfg = input;

  json& sp = cfg["space"];
  set_default(sp, "scale", 1.0);
  const std::string kind = sp["kind"];
  const int dim = sp["dim"];
  const double scale = sp["scale"];
  ModelSpace space = kind == "sphere"       ? ModelSpace::sphere(dim, scale)
                     : kind == "hyperbolic" ? ModelSpace::hyperbolic(dim, scale)
                                            : ModelSpace::euclidean(dim);

  set_default(cfg, "weight", std::string("zero"));
  WeightFunction weight = WeightFunction::parse(cfg["weight"]);

  const json& pj = cfg["params"];
  const ExtendedReal N = pj["N"].is_string() ? ExtendedReal::infinity() : ExtendedReal(pj["N"].get<double>());
  DimensionParams params = validate_params(pj["n"].get<int>(), N, pj["eps"].get<double>());
  if (params.n != dim) {
    throw DimensionError("params.n = " + std::to_string(params.n) + " differs from space.dim = " + std::to_string(dim));
  }
  if (params.is_n_equal() && !weight.is_constant()) {
    throw ConfigError("N = n requires a constant weight, got " + weight.name());
  }

  json& sampling = cfg["sampling"];
  if (sampling.is_null()) sampling = json::object();
  set_default(sampling, "trials", 1000);
  set_default(sampling, "seed", 0);
  set_default(sampling, "t_grid", default_t_grid());
  if (overrides.seed) sampling["seed"] = *overrides.seed;

  if (cfg.contains("region")) {
    if (space.kind() == SpaceKind::kSphere) throw ConfigError("region does not apply to spheres");
    require_size(cfg["region"]["lo"], dim, "region.lo");
    require_size(cfg["region"]["hi"], dim, "region.hi");
    for (int i = 0; i < dim; ++i) {
      if (!(cfg["region"]["lo"][i].get<double>() < cfg["region"]["hi"][i].get<double>())) {
        throw ConfigError("region needs lo < hi in every coordinate");
      }
    }
  }

  json& out = cfg["output"];
  if (out.is_null()) out = json::object();
  set_default(out, "dir", std::string("cdcheck-out"));
  set_default(out, "csv", true);
  if (overrides.out_dir) out["dir"] = *overrides.out_dir;

  Setting s{cfg, base_dir, space, weight, params, cfg["kappa"].get<double>(),
            cfg["sampling"]["seed"].get<std::uint64_t>(), cfg["sampling"]["trials"].get<std::size_t>(),
            cfg["sampling"]["t_grid"].get<std::vector<double>>()};
  json& c = s.config;
  const std::vector<std::string> suites = s.suites();
  auto runs = [&](const std::string& name) { return std::find(suites.begin(), suites.end(), name) != suites.end(); };

  std::shared_ptr<const AxisMeasure> axis;
  auto axis_measure = [&]() -> const AxisMeasure& {
    if (!axis) axis = AxisMeasure::make(space, weight);
    return *axis;
  };

  if (runs("jacobian")) {
    json& j = c["jacobian"];
    if (j.is_null()) j = json::object();
    set_default(j, "speed_lo", 0.1);
    set_default(j, "speed_hi", 0.0);
    set_default(j, "steps", 256);
    set_default(j, "det_floor", 1e-2);
    if (j.contains("ray_region")) {
      if (space.kind() == SpaceKind::kSphere) throw ConfigError("jacobian.ray_region does not apply to spheres");
      require_size(j["ray_region"]["lo"], dim, "jacobian.ray_region.lo");
      require_size(j["ray_region"]["hi"], dim, "jacobian.ray_region.hi");
    }
  }
  if (runs("twcd")) {
    if (!c.contains("twcd")) throw ConfigError("suite twcd needs a twcd block");
    json& t = c["twcd"];
    set_default(t, "functional", std::string("renyi"));
    set_default(t, "log2_cells", 10);
    set_default(t, "classical", false);
    for (std::size_t k = 0; k < t["pairs"].size(); ++k) {
      const std::string where = "twcd.pairs[" + std::to_string(k) + "]";
      t["pairs"][k]["rho0"] = resolve_density(t["pairs"][k]["rho0"], axis_measure(), where + ".rho0");
      t["pairs"][k]["rho1"] = resolve_density(t["pairs"][k]["rho1"], axis_measure(), where + ".rho1");
    }
    if (t["classical"].get<bool>() &&
        !(params.eps == 1.0 && weight.preset() == "zero" && params.is_n_equal() && space.kind() == SpaceKind::kEuclidean)) {
      throw ConfigError("twcd.classical needs a euclidean space, weight zero, N = n and eps = 1");
    }
  }
  if (runs("bm")) {
    if (!c.contains("bm")) throw ConfigError("suite bm needs a bm block");
    json& b = c["bm"];
    b["X"] = resolve_set(b["X"], space, "bm.X");
    b["Y"] = resolve_set(b["Y"], space, "bm.Y");
    if (b["X"].contains("ball") != b["Y"].contains("ball")) throw RegionError("bm.X and bm.Y must have the same shape");
    set_default(b, "t", 0.5);
    set_default(b, "grid", 32);
  }
  if (runs("interpolation")) {
    if (!c.contains("interpolation")) throw ConfigError("suite interpolation needs an interpolation block");
    json& ip = c["interpolation"];
    for (const char* key : {"psi0", "psi1", "psi"}) {
      if (ip.contains(key)) ip[key] = resolve_density(ip[key], axis_measure(), std::string("interpolation.") + key);
    }
    set_default(ip, "t", 0.5);
    set_default(ip, "log2_cells", 7);
    set_default(ip, "hypothesis_samples", 10000);
    if (ip["p"].is_string()) ip["p"] = -params.c_ratio();
  }
  if (runs("functional")) {
    if (!c.contains("functional")) throw ConfigError("suite functional needs a functional block");
    json& f = c["functional"];
    for (std::size_t k = 0; k < f["densities"].size(); ++k) {
      f["densities"][k] = resolve_density(f["densities"][k], axis_measure(), "functional.densities[" + std::to_string(k) + "]");
    }
    set_default(f, "delta", 0.0);
    set_default(f, "log2_cells", 12);
  }
  if (runs("taylor")) {
    json& t = c["taylor"];
    if (t.is_null()) t = json::object();
    const Probe p = resolve_probe(t, space, "taylor");
    const Tangent v = resolve_direction(t, space, p.x, "taylor");
    set_default(t, "deltas", default_delta_grid());
    set_default(t, "gradf_v", weight.slope(space, p.x, v));
    set_default(t, "theta_points", 100);
    if (!t.contains("terms")) {
      json terms = json::array();
      const double g = weight.slope(space, p.x, v);
      const bool theta_ok = params.eps != 0.0 && (std::isfinite(params.eps0) || g == 0.0);
      for (SeriesTerm term : all_series_terms()) {
        const bool needs_theta = term == SeriesTerm::kApp4 || term == SeriesTerm::kApp6;
        if (!needs_theta || theta_ok) terms.push_back(to_string(term));
      }
      t["terms"] = terms;
    }
  }
  if (runs("limits")) {
    json& l = c["limits"];
    if (l.is_null()) l = json::object();
    const Probe p = resolve_probe(l, space, "limits");
    if (!l.contains("y")) {
      const Tangent v = space.normalize(p.x, space.project(p.x, default_probe(space).v));
      l["y"] = from_eigen(space.geodesic_point(p.x, v, 0.5));
    }
    require_size(l["y"], space.ambient_dim(), "limits.y");
    l["y"] = from_eigen(space.canonical(as_eigen(l["y"])));
    set_default(l, "bound_t", 0.5);
    set_default(l, "halvings", 10);
  }

  json& tol = c["tolerances"];
  if (tol.is_null()) tol = json::object();
  std::set<std::string> known;
  for (const std::string& suite : suites) {
    for (const std::string& name : kSuiteReports.at(suite)) known.insert(name);
  }
  for (const auto& [key, _] : tol.items()) {
    if (!known.count(key)) throw ConfigError("tolerances." + key + " does not name a check of this suite");
  }
  for (const std::string& name : known) set_default(tol, name.c_str(), default_tolerance(name, c));
  return s;
}

std::string config_hash(const json& resolved) {
  json copy = resolved;
  copy.erase("output");
  return fnv1a_hex(copy.dump());
}

}  // namespace cdcheck::tools

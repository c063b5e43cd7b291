#include "cdcheck/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <boost/math/quadrature/gauss.hpp>

#include "cdcheck/coefficients.hpp"
#include "cdcheck/errors.hpp"
#include "cdcheck/numerics.hpp"
#include "cdcheck/reparam.hpp"

namespace cdcheck {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Remainders below kFloorUlps * eps * max(1, |exact|) are rounding noise.
constexpr double kFloorUlps = 1e4;
constexpr std::size_t kFitPoints = 4;

using GL = boost::math::quadrature::gauss<double, 20>;

// Local data of the expansion at x along v.
struct Jet {
  double f0, g, H, a, alpha, K, c, q;
  int n;
};

Jet make_jet(const ModelSpace& space, const WeightFunction& weight, const DimensionParams& params, double kappa,
             const Point& x, const Tangent& v) {
  Jet j;
  j.f0 = weight.value(space, x);
  j.g = weight.slope(space, x, v);
  j.H = weight.hess(space, x, v, v);
  j.a = params.reparam_rate();
  j.alpha = 0.5 * j.a;
  j.c = params.c;
  j.q = params.c_ratio();
  j.K = kappa / params.c * std::exp(-2.0 * j.a * j.f0);
  j.n = params.n;
  return j;
}

bool uses_theta(SeriesTerm term) { return term == SeriesTerm::kApp4 || term == SeriesTerm::kApp6; }

// Fits the remainder slope on the (at most kFitPoints) smallest deltas whose
// remainder clears the noise floor by a factor of ten.
void fit_component(SeriesComponent& comp) {
  std::vector<std::size_t> usable;
  for (std::size_t k = 0; k < comp.delta.size(); ++k) {
    comp.remainder[k] = comp.exact[k] - comp.series[k];
    const double floor = kFloorUlps * kEps * std::max(1.0, std::abs(comp.exact[k]));
    if (std::abs(comp.remainder[k]) > 10.0 * floor) usable.push_back(k);
  }
  std::sort(usable.begin(), usable.end(), [&](std::size_t i, std::size_t j) { return comp.delta[i] < comp.delta[j]; });
  if (usable.size() > kFitPoints) usable.resize(kFitPoints);
  std::vector<double> xs, ys;
  for (std::size_t k : usable) {
    xs.push_back(comp.delta[k]);
    ys.push_back(comp.remainder[k]);
  }
  comp.fitted = xs.size();
  if (xs.size() >= 2) {
    comp.slope = loglog_slope(xs, ys);
  } else {
    comp.noise_limited = true;
    comp.slope = std::numeric_limits<double>::infinity();
  }
}

}  // namespace

Series2 Series2::operator+(const Series2& o) const { return {{a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2]}}; }

Series2 Series2::operator*(const Series2& o) const {
  return {{a[0] * o.a[0], a[0] * o.a[1] + a[1] * o.a[0], a[0] * o.a[2] + a[1] * o.a[1] + a[2] * o.a[0]}};
}

Series2 Series2::operator*(double s) const { return {{a[0] * s, a[1] * s, a[2] * s}}; }

Series2 Series2::pow(double p) const {
  if (!(a[0] > 0.0)) throw ConfigError("series power needs a positive constant term");
  const double u1 = a[1] / a[0], u2 = a[2] / a[0];
  const double lead = std::pow(a[0], p);
  return {{lead, lead * p * u1, lead * (p * u2 + 0.5 * p * (p - 1.0) * u1 * u1)}};
}

const char* to_string(SeriesTerm term) {
  switch (term) {
    case SeriesTerm::kApp1: return "app1";
    case SeriesTerm::kApp2: return "app2";
    case SeriesTerm::kApp3: return "app3";
    case SeriesTerm::kApp4: return "app4";
    case SeriesTerm::kApp6: return "app6";
  }
  return "unknown";
}

SeriesTerm parse_series_term(const std::string& id) {
  for (SeriesTerm t : all_series_terms()) {
    if (id == to_string(t)) return t;
  }
  throw ConfigError("unknown series term '" + id + "' (expected app1, app2, app3, app4 or app6)");
}

std::vector<SeriesTerm> all_series_terms() {
  return {SeriesTerm::kApp1, SeriesTerm::kApp2, SeriesTerm::kApp3, SeriesTerm::kApp4, SeriesTerm::kApp6};
}

std::vector<double> default_delta_grid() {
  std::vector<double> g;
  for (int k = 2; k <= 12; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

double theta_eps(const DimensionParams& params, double gradf_v) {
  if (params.eps == 0.0) throw PreconditionError("theta_eps needs eps != 0");
  if (!std::isfinite(params.eps0)) {
    if (gradf_v == 0.0) return 0.0;
    throw PreconditionError("theta_eps needs a finite eps0 (N != n) when g(grad f, v) != 0");
  }
  return -(params.eps - params.eps0) * gradf_v / ((params.n - 1) * params.eps);
}

double F_theta(const DimensionParams& params, double theta, double gradf_v) {
  const int n = params.n;
  const double c = params.c;
  const double alpha = (1.0 - params.eps) / (n - 1);
  return n * (n - (n - 1) * (c + 1.0)) * theta * theta + 2.0 * n * (alpha - c) * gradf_v * theta +
         (alpha * alpha + 2.0 * alpha - c) * gradf_v * gradf_v;
}

SeriesCheck check_series(const ModelSpace& space, const WeightFunction& weight, const DimensionParams& params,
                         double kappa, const Point& x, const Tangent& v_in, SeriesTerm term,
                         const std::vector<double>& grid) {
  const Tangent v = space.normalize(x, v_in);
  const Jet J = make_jet(space, weight, params, kappa, x, v);
  const double theta = uses_theta(term) ? theta_eps(params, J.g) : 0.0;
  double dmax = 0.0;
  for (double d : grid) dmax = std::max(dmax, d);
  if (2.0 * dmax >= space.cut_time(x, v) - ModelSpace::kCutMargin) {
    throw CutLocusError("gamma(+-delta) is not cut-clear for delta = " + std::to_string(dmax));
  }
  auto gamma = [&](double s) { return s >= 0 ? space.geodesic_point(x, v, s) : space.geodesic_point(x, -v, -s); };
  auto integrand = [&](double s) { return std::exp(-J.a * weight.value(space, gamma(s))); };
  const double e0 = std::exp(-J.a * J.f0);
  const double b1 = J.alpha / J.c;
  const double b2 = J.K + (1.0 - J.c) * b1 * b1 * J.g * J.g;

  SeriesCheck out;
  out.term = term;
  std::vector<std::string> ids;
  switch (term) {
    case SeriesTerm::kApp1: ids = {"app1_half_forward", "app1_half_backward", "app1_full"}; break;
    case SeriesTerm::kApp2: ids = {"app2_forward", "app2_backward"}; break;
    case SeriesTerm::kApp3: ids = {"app3_minus", "app3_plus"}; break;
    case SeriesTerm::kApp4: ids = {"app4_plus", "app4_minus"}; break;
    case SeriesTerm::kApp6: ids = {"app6"}; break;
  }
  for (const auto& id : ids) {
    SeriesComponent c;
    c.id = id;
    c.delta = grid;
    c.exact.resize(grid.size());
    c.series.resize(grid.size());
    c.remainder.resize(grid.size());
    out.components.push_back(std::move(c));
  }

  std::vector<double> extra_margins;
  double identity_error = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = grid[k];
    const double dp = GL::integrate(integrand, 0.0, d);
    const double dm = GL::integrate(integrand, -d, 0.0);
    const double D = dp + dm;
    auto& C = out.components;
    switch (term) {
      case SeriesTerm::kApp1: {
        C[0].exact[k] = dp;
        C[0].series[k] = e0 * (d - 0.5 * J.a * J.g * d * d);
        C[1].exact[k] = dm;
        C[1].series[k] = e0 * (d + 0.5 * J.a * J.g * d * d);
        C[2].exact[k] = D;
        C[2].series[k] = 2.0 * e0 * d;
        // The module's re-parametrized distance against the displayed integral.
        const double via_module = reparam_distance_t(space, weight, params, gamma(d), gamma(-d), 0.5).value;
        identity_error = std::max(identity_error, std::abs(via_module - dp) / dp);
        break;
      }
      case SeriesTerm::kApp2: {
        C[0].exact[k] = beta_from_distances(kappa, J.c, 0.5, dp, D).value;
        C[0].series[k] = 1.0 - b1 * J.g * d + 0.5 * b2 * d * d;
        C[1].exact[k] = beta_from_distances(kappa, J.c, 0.5, dm, D).value;
        C[1].series[k] = 1.0 + b1 * J.g * d + 0.5 * b2 * d * d;
        const double via_module = beta(space, weight, params, kappa, 0.5, gamma(d), gamma(-d)).value;
        identity_error = std::max(identity_error, std::abs(via_module - C[0].exact[k]));
        break;
      }
      case SeriesTerm::kApp3: {
        C[0].exact[k] = std::exp(-weight.value(space, gamma(-d)) + J.f0);
        C[0].series[k] = 1.0 + J.g * d + 0.5 * (J.g * J.g - J.H) * d * d;
        C[1].exact[k] = std::exp(-weight.value(space, gamma(d)) + J.f0);
        C[1].series[k] = 1.0 - J.g * d + 0.5 * (J.g * J.g - J.H) * d * d;
        break;
      }
      case SeriesTerm::kApp4: {
        const double nn = J.n;
        C[0].exact[k] = std::pow(1.0 + theta * d, nn);
        C[0].series[k] = 1.0 + nn * theta * d + 0.5 * nn * (nn - 1.0) * theta * theta * d * d;
        C[1].exact[k] = std::pow(1.0 - theta * d, nn);
        C[1].series[k] = 1.0 - nn * theta * d + 0.5 * nn * (nn - 1.0) * theta * theta * d * d;
        break;
      }
      case SeriesTerm::kApp6: {
        const double Pp = std::exp(-weight.value(space, gamma(-d))) * std::pow(1.0 + theta * d, J.n) *
                          beta_from_distances(kappa, J.c, 0.5, dp, D).value;
        const double Pm = std::exp(-weight.value(space, gamma(d))) * std::pow(1.0 - theta * d, J.n) *
                          beta_from_distances(kappa, J.c, 0.5, dm, D).value;
        C[0].exact[k] = std::pow(0.5 * std::pow(Pp, J.q) + 0.5 * std::pow(Pm, J.q), 1.0 / J.q);
        const double F = F_theta(params, theta, J.g);
        C[0].series[k] = std::exp(-J.f0) * (1.0 + 0.5 * (J.K - J.H - F / (J.c + 1.0)) * d * d);
        break;
      }
    }
  }

  std::vector<double> margins;
  nlohmann::json comps = nlohmann::json::array();
  for (auto& comp : out.components) {
    fit_component(comp);
    margins.push_back(comp.noise_limited ? 0.0 : comp.slope - kSlopeThreshold);
    comps.push_back({{"id", comp.id},
                     {"slope", comp.noise_limited ? nlohmann::json("noise-limited") : nlohmann::json(comp.slope)},
                     {"fitted_points", comp.fitted}});
  }
  if (term == SeriesTerm::kApp1 || term == SeriesTerm::kApp2) margins.push_back(1e-9 - identity_error);
  out.report = make_report(std::string("taylor_") + to_string(term), std::move(margins), 0.0);
  out.report.details["components"] = comps;
  out.report.details["slope_threshold"] = kSlopeThreshold;
  if (term == SeriesTerm::kApp1 || term == SeriesTerm::kApp2) out.report.details["identity_error"] = identity_error;
  if (uses_theta(term)) out.report.details["theta"] = theta;
  if (term == SeriesTerm::kApp6) {
    const ProductRoute pr = app6_product_route(space, weight, params, kappa, x, v);
    out.report.details["product_route_difference"] = pr.difference_at;
    out.report.margins.push_back(1e-9 - pr.difference_at);
    finalize(out.report);
  }
  return out;
}

ProductRoute app6_product_route(const ModelSpace& space, const WeightFunction& weight, const DimensionParams& params,
                                double kappa, const Point& x, const Tangent& v_in, double probe) {
  const Tangent v = space.normalize(x, v_in);
  const Jet J = make_jet(space, weight, params, kappa, x, v);
  const double theta = theta_eps(params, J.g);
  const double b1 = J.alpha / J.c;
  const double b2 = 0.5 * (J.K + (1.0 - J.c) * b1 * b1 * J.g * J.g);
  const double e2 = 0.5 * (J.g * J.g - J.H);
  const double nn = J.n;
  const Series2 beta_fwd{{1.0, -b1 * J.g, b2}}, beta_bwd{{1.0, b1 * J.g, b2}};
  const Series2 exp_minus{{1.0, J.g, e2}}, exp_plus{{1.0, -J.g, e2}};
  const Series2 pow_plus{{1.0, nn * theta, 0.5 * nn * (nn - 1.0) * theta * theta}};
  const Series2 pow_minus{{1.0, -nn * theta, 0.5 * nn * (nn - 1.0) * theta * theta}};
  const double ef = std::exp(-J.f0);
  const Series2 Pp = exp_minus * pow_plus * beta_fwd * ef;
  const Series2 Pm = exp_plus * pow_minus * beta_bwd * ef;
  ProductRoute r;
  r.route = (Pp.pow(J.q) * 0.5 + Pm.pow(J.q) * 0.5).pow(1.0 / J.q);
  const double F = F_theta(params, theta, J.g);
  r.displayed = Series2{{ef, 0.0, ef * 0.5 * (J.K - J.H - F / (J.c + 1.0))}};
  r.difference_at = std::abs(r.route(probe) - r.displayed(probe));
  return r;
}

CheckReport check_F_identity(const DimensionParams& params, double gradf_v, const std::vector<double>& thetas) {
  if (params.is_n_equal() || !std::isfinite(params.eps0)) throw PreconditionError("F identity needs N != n");
  if (params.eps0 == 0.0) throw PreconditionError("F identity needs eps0 != 0 (N != 1)");
  const int n = params.n;
  std::vector<double> margins;
  double worst = 0.0;
  for (double th : thetas) {
    const double lhs = F_theta(params, th, gradf_v) + (params.c + 1.0) * params.inverse_gap() * gradf_v * gradf_v;
    const double inner = params.eps * th + (params.eps - params.eps0) * gradf_v / (n - 1);
    const double rhs = n / params.eps0 * inner * inner;
    margins.push_back(-std::abs(lhs - rhs));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  CheckReport rep = make_report("F_identity", std::move(margins), 1e-10);
  rep.details["gradf_v"] = gradf_v;
  rep.details["max_abs_difference"] = worst;
  return rep;
}

CheckReport check_limit_bound(const ModelSpace& space, const WeightFunction& weight, const DimensionParams& params,
                              double t, const Point& x, const Tangent& v_in, double r, int halvings,
                              std::uint64_t seed) {
  if (!(t > 0.0 && t < 1.0)) throw ConfigError("limit bound needs t in ]0,1[");
  const Tangent v = space.normalize(x, v_in);
  if (r >= space.cut_time(x, v) - ModelSpace::kCutMargin) throw CutLocusError("radius reaches the cut locus");
  const double sup = sampled_grad_sup(space, weight, x, v, r, 256, seed);
  std::vector<double> margins;
  nlohmann::json rows = nlohmann::json::array();
  for (int j = 0; j <= halvings; ++j) {
    const double dj = r * std::ldexp(1.0, -j);
    const Point y = space.geodesic_point(x, v, dj);
    const double part = reparam_distance_t(space, weight, params, x, y, t).value;
    const double full = reparam_distance(space, weight, params, x, y).value;
    const double lhs = std::abs(part / (t * full) - 1.0);
    const double rhs = limit_bound(params, t, sup, r, dj);
    margins.push_back(rhs - lhs);
    rows.push_back({{"d", dj}, {"lhs", lhs}, {"rhs", rhs}});
  }
  CheckReport rep = make_report("limit_bound", std::move(margins), 1e-10, seed);
  rep.details["grad_sup"] = sup;
  rep.details["rows"] = rows;
  return rep;
}

void write_series_csv(std::ostream& os, const SeriesComponent& comp) {
  os << "delta,exact,series,remainder\n";
  os.precision(17);
  for (std::size_t k = 0; k < comp.delta.size(); ++k) {
    os << comp.delta[k] << ',' << comp.exact[k] << ',' << comp.series[k] << ',' << comp.remainder[k] << '\n';
  }
}

}  // namespace cdcheck

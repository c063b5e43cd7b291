#include "cdcheck/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdcheck/errors.hpp"
#include "cdcheck/numerics.hpp"
#include "cdcheck/reparam.hpp"

namespace cdcheck {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_ratio_term(double kappa, double num, double den) {
  return std::log(s_kappa(kappa, num)) - std::log(s_kappa(kappa, den));
}

}  // namespace

const char* to_string(CoefficientRegime r) {
  switch (r) {
    case CoefficientRegime::kUnit: return "unit";
    case CoefficientRegime::kFinite: return "finite";
    case CoefficientRegime::kInfinite: return "infinite";
  }
  return "unknown";
}

double TwistedCoefficient::power(double exponent) const {
  if (regime == CoefficientRegime::kInfinite) return kInf;
  return std::exp(exponent * log_value);
}

bool beyond_diameter(double kappa, double d_full) {
  const double C = diam_kappa(kappa);
  return std::isfinite(C) && d_full >= C - 1e-12;
}

TwistedCoefficient beta_from_distances(double kappa, double c, double t, double d_t, double d_full) {
  TwistedCoefficient b;
  if (d_full == 0.0) return b;
  if (beyond_diameter(kappa, d_full)) {
    b.regime = CoefficientRegime::kInfinite;
    b.value = kInf;
    b.log_value = kInf;
    return b;
  }
  b.regime = CoefficientRegime::kFinite;
  b.log_value = (log_ratio_term(kappa, d_t, d_full) - std::log(t)) / c;
  b.value = std::exp(b.log_value);
  return b;
}

TwistedCoefficient beta(const ModelSpace& space, const WeightFunction& weight,
                        const DimensionParams& params, double kappa, double t,
                        const Point& x, const Point& y) {
  const GeodesicSegment seg = space.log_map(x, y);
  if (seg.degenerate) return {};
  const double d_full = reparam_along(space, weight, params, seg, 1.0).value;
  const double d_t = reparam_along(space, weight, params, seg, t).value;
  return beta_from_distances(kappa, params.c, t, d_t, d_full);
}

double b_coeff(const ModelSpace& space, const WeightFunction& weight,
               const DimensionParams& params, double kappa, const Point& x, const Point& y) {
  const GeodesicSegment seg = space.log_map(x, y);
  if (seg.degenerate) return 1.0;
  const double D = reparam_along(space, weight, params, seg, 1.0).value;
  if (beyond_diameter(kappa, D)) return kInf;
  const double lead = std::exp(-params.reparam_rate() * weight.value(space, x)) * seg.length;
  return std::exp((std::log(lead) - std::log(s_kappa(kappa, D))) / params.c);
}

double frak_b(const ModelSpace& space, const WeightFunction& weight,
              const DimensionParams& params, double kappa, const Point& x, const Point& y) {
  const GeodesicSegment seg = space.log_map(x, y);
  if (seg.degenerate) return 0.0;
  const double D = reparam_along(space, weight, params, seg, 1.0).value;
  if (beyond_diameter(kappa, D)) return kInf;
  const double lead = std::exp(-params.reparam_rate() * weight.value(space, x)) * seg.length;
  return (lead * c_kappa(kappa, D) / s_kappa(kappa, D) - 1.0) / (params.c + 1.0);
}

double limit_bound(const DimensionParams& params, double t, double grad_sup, double r, double d) {
  const double a = std::abs(params.reparam_rate());
  const double A = (1.0 - t) * grad_sup;
  return a * A * std::exp(a * A * r) * d;
}

double sampled_grad_sup(const ModelSpace& space, const WeightFunction& weight, const Point& x,
                        const Tangent& v, double r, std::size_t samples, std::uint64_t seed) {
  if (weight.is_constant()) return 0.0;
  auto gnorm = [&](const Point& p) { return space.norm(p, weight.grad(space, p)); };
  double sup = 0.0;
  for (int k = 0; k <= 64; ++k) {
    sup = std::max(sup, gnorm(space.geodesic_point(x, v, r * k / 64.0)));
  }
  for (std::size_t i = 0; i < samples; ++i) {
    auto rng = sample_rng(seed, i);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Tangent w = space.random_unit_tangent(x, rng);
    sup = std::max(sup, gnorm(space.geodesic_point(x, w, r * u(rng))));
  }
  return sup;
}

CheckReport check_limits(const ModelSpace& space, const WeightFunction& weight,
                         const DimensionParams& params, double kappa, const Point& x,
                         const Point& y, const LimitOptions& options) {
  const GeodesicSegment seg = space.log_map(x, y);
  if (seg.degenerate) return vacuous_report("limits", "x = y");
  const double D = reparam_along(space, weight, params, seg, 1.0).value;
  if (beyond_diameter(kappa, D)) {
    return vacuous_report("limits", "re-parametrized distance reaches the model diameter");
  }

  std::vector<double> ts = options.t_grid;
  if (ts.empty()) {
    for (int k = 0; k <= 6; ++k) ts.push_back(0.1 * std::ldexp(1.0, -k));
  }
  const double c = params.c;
  const double q = params.c_ratio();
  std::vector<double> beta_t, slope_t;
  for (double t : ts) {
    const double d_t = reparam_along(space, weight, params, seg, t).value;
    beta_t.push_back(beta_from_distances(kappa, c, t, d_t, D).value);
    // beta_{1-t}(y, x) uses the complementary piece D - d_t of the same segment.
    const double log_b = (log_ratio_term(kappa, D - d_t, D) - std::log1p(-t)) / c;
    slope_t.push_back(-std::expm1(q * log_b) / t);
  }
  const ExtrapolationResult b_ext = extrapolate_to_zero(ts, beta_t);
  const ExtrapolationResult fb_ext = extrapolate_to_zero(ts, slope_t);
  const double b_ref = b_coeff(space, weight, params, kappa, x, y);
  const double fb_ref = frak_b(space, weight, params, kappa, x, y);
  const double err_b = std::abs(b_ext.value - b_ref) / std::max(1.0, std::abs(b_ref));
  const double err_fb = std::abs(fb_ext.value - fb_ref) / std::max(1.0, std::abs(fb_ref));

  std::vector<double> margins = {-err_b, -err_fb};

  const double r = options.bound_radius > 0 ? options.bound_radius : seg.length;
  const double t = options.bound_t;
  const double sup = sampled_grad_sup(space, weight, x, seg.direction, r, 256, options.seed);
  nlohmann::json rows = nlohmann::json::array();
  double prev_dev = 0.0;
  for (int j = 0; j <= options.halvings; ++j) {
    const double dj = r * std::ldexp(1.0, -j);
    GeodesicSegment sj = seg;
    sj.end = space.geodesic_point(x, seg.direction, dj);
    sj.length = dj;
    const double full = reparam_along(space, weight, params, sj, 1.0).value;
    const double part = reparam_along(space, weight, params, sj, t).value;
    const double lhs = std::abs(part / (t * full) - 1.0);
    const double rhs = limit_bound(params, t, sup, r, dj);
    margins.push_back(rhs - lhs);
    const double dev = std::abs(beta_from_distances(kappa, c, t, part, full).value - 1.0);
    // Once d is small, halving d must shrink |beta - 1| at least linearly.
    if (2 * j > options.halvings && prev_dev > 1e-10) margins.push_back(0.75 - dev / prev_dev);
    prev_dev = dev;
    rows.push_back({{"d", dj}, {"lhs", lhs}, {"rhs", rhs}, {"beta_minus_one", dev}});
  }

  CheckReport rep = make_report("limits", std::move(margins), options.extrapolation_tol, options.seed);
  rep.details["b"] = b_ref;
  rep.details["b_extrapolated"] = b_ext.value;
  rep.details["frak_b"] = fb_ref;
  rep.details["frak_b_extrapolated"] = fb_ext.value;
  rep.details["extrapolation_error_estimate"] = {b_ext.error, fb_ext.error};
  rep.details["grad_sup"] = sup;
  rep.details["bound_rows"] = rows;
  return rep;
}

}  // namespace cdcheck

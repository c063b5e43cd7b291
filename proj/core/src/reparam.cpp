#include "cdcheck/reparam.hpp"

#include <cmath>
#include <limits>

#include "cdcheck/numerics.hpp"

namespace cdcheck {

namespace {

QuadratureResult integrate_segment(const ModelSpace& space, const WeightFunction& weight,
                                   const DimensionParams& params, const Point& x,
                                   const Tangent& v, double t) {
  if (t <= 0.0) return {};
  const double rate = params.reparam_rate();
  if (weight.is_constant() || rate == 0.0) {
    return {t * std::exp(-rate * weight.value(space, x)), 0.0};
  }
  auto integrand = [&](double xi) {
    return std::exp(-rate * weight.value(space, space.geodesic_point(x, v, xi)));
  };
  return adaptive_simpson(integrand, 0.0, t, 1e-10, 30);
}

}  // namespace

double s_integral(const ModelSpace& space, const WeightFunction& weight,
                  const DimensionParams& params, const Point& x, const Tangent& v, double t) {
  return integrate_segment(space, weight, params, x, v, t).value;
}

ReparamResult reparam_along(const ModelSpace& space, const WeightFunction& weight,
                            const DimensionParams& params, const GeodesicSegment& seg, double t) {
  ReparamResult r;
  r.segment = seg;
  if (seg.degenerate || seg.length == 0.0) return r;
  const QuadratureResult q =
      integrate_segment(space, weight, params, seg.start, seg.direction, t * seg.length);
  r.value = q.value;
  r.quadrature_error = q.error;
  return r;
}

ReparamResult reparam_distance_t(const ModelSpace& space, const WeightFunction& weight,
                                 const DimensionParams& params, const Point& x,
                                 const Point& y, double t) {
  return reparam_along(space, weight, params, space.log_map(x, y), t);
}

double tau_directional(const ModelSpace& space, const Point& x, const Tangent& v) {
  return space.cut_time(x, v);
}

double tau_reparam(const ModelSpace& space, const WeightFunction& weight,
                   const DimensionParams& params, const Point& x, const Tangent& v) {
  const double tau = tau_directional(space, x, v);
  if (std::isfinite(tau)) return s_integral(space, weight, params, x, v, tau);
  const double rate = params.reparam_rate();
  const double tail = std::exp(-rate * weight.value(space, space.geodesic_point(x, v, kTauHorizon)));
  if (!(tail < 1e-12)) return std::numeric_limits<double>::infinity();
  // Split the horizon so the adaptive rule sees the decaying region.
  double total = 0.0;
  double lo = 0.0;
  for (double hi = 1.0; lo < kTauHorizon; hi = std::min(2.0 * hi, kTauHorizon)) {
    auto integrand = [&](double xi) {
      return std::exp(-rate * weight.value(space, space.geodesic_point(x, v, xi)));
    };
    total += adaptive_simpson(integrand, lo, hi, 1e-10, 30).value;
    lo = hi;
  }
  return total;
}

}  // namespace cdcheck

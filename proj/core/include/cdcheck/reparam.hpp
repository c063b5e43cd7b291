#pragma once

#include "cdcheck/model_space.hpp"
#include "cdcheck/params.hpp"
#include "cdcheck/weight.hpp"

namespace cdcheck {

struct ReparamResult {
  double value = 0.0;
  GeodesicSegment segment;
  double quadrature_error = 0.0;
};

// Integral of exp(-rate f(gamma_v(xi))) over xi in [0, t], rate = 2(1-eps)/(n-1).
double s_integral(const ModelSpace& space, const WeightFunction& weight,
                  const DimensionParams& params, const Point& x, const Tangent& v, double t);

// Re-parametrized distance along the minimal geodesic x -> y, truncated at
// arclength t * d(x, y). t = 1 gives the full distance.
ReparamResult reparam_distance_t(const ModelSpace& space, const WeightFunction& weight,
                                 const DimensionParams& params, const Point& x,
                                 const Point& y, double t);

inline ReparamResult reparam_distance(const ModelSpace& space, const WeightFunction& weight,
                                      const DimensionParams& params, const Point& x,
                                      const Point& y) {
  return reparam_distance_t(space, weight, params, x, y, 1.0);
}

// Same as reparam_distance_t on an already resolved segment.
ReparamResult reparam_along(const ModelSpace& space, const WeightFunction& weight,
                            const DimensionParams& params, const GeodesicSegment& seg, double t);

// Cut time of the direction v.
double tau_directional(const ModelSpace& space, const Point& x, const Tangent& v);

// s_integral up to tau(v). For infinite tau the integral is taken up to
// kTauHorizon and reported as +inf unless the integrand has decayed there.
double tau_reparam(const ModelSpace& space, const WeightFunction& weight,
                   const DimensionParams& params, const Point& x, const Tangent& v);

inline constexpr double kTauHorizon = 1e3;

}  // namespace cdcheck

#pragma once

#include <cstdint>

#include "cdcheck/model_space.hpp"
#include "cdcheck/params.hpp"
#include "cdcheck/report.hpp"
#include "cdcheck/weight.hpp"

namespace cdcheck {

// Ric_g(v) + hess f(v, v) - g(grad f, v)^2 / (N - n); the last term vanishes
// for N = inf. Throws ConfigError when N = n and f is not constant.
double ricci_fN(const ModelSpace& space, const WeightFunction& weight,
                const DimensionParams& params, const Point& x, const Tangent& v);

// Lower bound c^{-1} kappa exp(-2 rate f(x)) required of Ric_f^N on unit
// vectors at x, rate = params.reparam_rate().
double curvature_threshold(const WeightFunction& weight, const ModelSpace& space,
                           const DimensionParams& params, double kappa, const Point& x);

// Smallest eigenvalue of v -> Ric_f^N(v) over unit v in T_x, minus the
// threshold.
double curvature_margin(const ModelSpace& space, const WeightFunction& weight,
                        const DimensionParams& params, double kappa, const Point& x);

struct CurvatureSampling {
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  Region region;
};

// Samples points and records the curvature margin at each; the minimum over
// unit directions is taken exactly via the quadratic form.
CheckReport check_curvature_bound(const ModelSpace& space, const WeightFunction& weight,
                                  const DimensionParams& params, double kappa,
                                  const CurvatureSampling& sampling);

}  // namespace cdcheck

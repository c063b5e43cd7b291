#pragma once

#include <span>
#include <vector>

#include "cdcheck/model_space.hpp"
#include "cdcheck/params.hpp"
#include "cdcheck/report.hpp"
#include "cdcheck/weight.hpp"

namespace cdcheck {

enum class CoefficientRegime { kUnit, kFinite, kInfinite };

const char* to_string(CoefficientRegime r);

struct TwistedCoefficient {
  double value = 1.0;
  double log_value = 0.0;
  CoefficientRegime regime = CoefficientRegime::kUnit;

  // value^{c/(c+1)}; 0 in the infinite regime is never used, +inf is kept.
  double power(double exponent) const;
};

// d_full >= diam_kappa - 1e-12 is classified as infinite.
bool beyond_diameter(double kappa, double d_full);

// Coefficient from precomputed re-parametrized distances d_t and d_full.
TwistedCoefficient beta_from_distances(double kappa, double c, double t, double d_t, double d_full);

// beta_{kappa,N,eps,f,t}(x, y). Throws CutLocusError for antipodal pairs.
TwistedCoefficient beta(const ModelSpace& space, const WeightFunction& weight,
                        const DimensionParams& params, double kappa, double t,
                        const Point& x, const Point& y);

// The t -> 0 limits of beta_t(x, y) and of (1 - beta_{1-t}(y, x)^{c/(c+1)}) / t.
double b_coeff(const ModelSpace& space, const WeightFunction& weight,
               const DimensionParams& params, double kappa, const Point& x, const Point& y);
double frak_b(const ModelSpace& space, const WeightFunction& weight,
              const DimensionParams& params, double kappa, const Point& x, const Point& y);

// Right-hand side |a| A exp(|a| A r) d of the small-distance bound, with A
// built from `grad_sup`, an upper bound for |grad f| near x.
double limit_bound(const DimensionParams& params, double t, double grad_sup, double r, double d);

// Largest |grad f| seen on the geodesic ball B_r(x): segment points from x
// along v plus `samples` random points of the ball.
double sampled_grad_sup(const ModelSpace& space, const WeightFunction& weight, const Point& x,
                        const Tangent& v, double r, std::size_t samples, std::uint64_t seed);

struct LimitOptions {
  std::vector<double> t_grid;  // empty: 0.1 * 2^-k, k = 0..6
  double extrapolation_tol = 1e-6;
  double bound_t = 0.5;
  double bound_radius = 0.0;   // 0: d(x, y)
  int halvings = 10;
  std::uint64_t seed = 0;
};

// Checks the two t -> 0 limits by polynomial extrapolation and the
// small-distance bound on pairs (x, gamma(r 2^-j)).
CheckReport check_limits(const ModelSpace& space, const WeightFunction& weight,
                         const DimensionParams& params, double kappa, const Point& x,
                         const Point& y, const LimitOptions& options = {});

}  // namespace cdcheck

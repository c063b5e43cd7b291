#include "cdcheck/curvature.hpp"

#include <cmath>

#include "cdcheck/errors.hpp"
#include "cdcheck/numerics.hpp"

namespace cdcheck {

namespace {

void require_compatible(const ModelSpace& space, const WeightFunction& weight,
                        const DimensionParams& params) {
  if (space.dim() != params.n) {
    throw DimensionError("space dimension " + std::to_string(space.dim()) +
                         " differs from n = " + std::to_string(params.n));
  }
  if (params.is_n_equal() && !weight.is_constant()) {
    throw ConfigError("N = n requires a constant weight, got " + weight.name());
  }
}

}  // namespace

double ricci_fN(const ModelSpace& space, const WeightFunction& weight,
                const DimensionParams& params, const Point& x, const Tangent& v) {
  require_compatible(space, weight, params);
  double r = space.ricci(x, v) + weight.hess(space, x, v, v);
  if (!params.N.is_infinite() && !params.is_n_equal()) {
    const double s = weight.slope(space, x, v);
    r -= s * s * params.inverse_gap();
  }
  return r;
}

double curvature_threshold(const WeightFunction& weight, const ModelSpace& space,
                           const DimensionParams& params, double kappa, const Point& x) {
  return kappa / params.c * std::exp(-2.0 * params.reparam_rate() * weight.value(space, x));
}

double curvature_margin(const ModelSpace& space, const WeightFunction& weight,
                        const DimensionParams& params, double kappa, const Point& x) {
  require_compatible(space, weight, params);
  const Eigen::MatrixXd frame = space.orthonormal_frame(x);
  const int n = space.dim();
  Eigen::MatrixXd Q(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Tangent ei = frame.col(i), ej = frame.col(j);
      double q = weight.hess(space, x, ei, ej);
      if (i == j) q += space.ricci(x, ei);
      if (!params.N.is_infinite() && !params.is_n_equal()) {
        q -= weight.slope(space, x, ei) * weight.slope(space, x, ej) * params.inverse_gap();
      }
      Q(i, j) = Q(j, i) = q;
    }
  }
  const double lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q, Eigen::EigenvaluesOnly).eigenvalues()(0);
  return lam - curvature_threshold(weight, space, params, kappa, x);
}

CheckReport check_curvature_bound(const ModelSpace& space, const WeightFunction& weight,
                                  const DimensionParams& params, double kappa,
                                  const CurvatureSampling& sampling) {
  require_compatible(space, weight, params);
  std::vector<double> margins(sampling.count);
  parallel_for(sampling.count, [&](std::size_t i) {
    auto rng = sample_rng(sampling.seed, i);
    const Point x = space.random_point(rng, sampling.region);
    margins[i] = curvature_margin(space, weight, params, kappa, x);
  });
  const double tol = weight.mode() == WeightMode::kAnalytic ? 1e-9 : 1e-5;
  CheckReport r = make_report("curvature_bound", std::move(margins), tol, sampling.seed);
  r.details["kappa"] = kappa;
  r.details["weight"] = weight.name();
  r.details["space"] = space.describe();
  return r;
}

}  // namespace cdcheck

#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "cdcheck/model_space.hpp"
#include "cdcheck/params.hpp"
#include "cdcheck/report.hpp"
#include "cdcheck/weight.hpp"

namespace cdcheck {

// A transport ray t -> exp_x(t w) with the Hessian S of the potential at x,
// written in the frame orthonormal_frame(x, w / |w|) (last axis along w).
struct TransportRay {
  Point x;
  Tangent w;
  Eigen::MatrixXd S;
};

struct JacobianTrajectory {
  TransportRay ray;
  double speed = 0.0;  // |w|
  std::vector<double> t;
  std::vector<Eigen::MatrixXd> E;   // Jacobi fields in the parallel frame
  std::vector<Eigen::MatrixXd> dE;
  std::vector<double> det, J, h, l, D, Dbar, a_nn;
  // Weight along the ray and its first two t-derivatives.
  std::vector<double> f, df, d2f;
  // Cumulative re-parametrized length d_{N,eps,f,t}(x, F_1 x).
  std::vector<double> reparam;
  double sectional = 0.0;
  double ricci_tail = 0.0;  // coefficient of g(grad f, .)^2 in Ric_f^N
  double c = 1.0;
  double rate = 0.0;

  std::size_t size() const { return t.size(); }
  double reparam_full() const { return reparam.back(); }
};

// RK4 integration of E'' = -k |w|^2 (E - <E, e_n> e_n), E(0) = I, E'(0) = S
// on a uniform grid of `steps` intervals. Throws SingularJacobian when
// det E(t) <= 0 at a grid point.
JacobianTrajectory integrate_jacobi(const ModelSpace& space, const WeightFunction& weight,
                                    const DimensionParams& params, const TransportRay& ray,
                                    int steps = 256);

// Ric_g(gamma') and Ric_f^N(gamma') at grid index i.
double ricci_along(const JacobianTrajectory& tr, std::size_t i);
double ricci_fN_along(const JacobianTrajectory& tr, std::size_t i);

// Riccati-type inequalities for h and for l, by five-point differences on
// interior grid points.
CheckReport check_riccati(const JacobianTrajectory& tr);

// Concavity of Dbar, the comparison for D, the weighted Jacobian bound and
// the algebraic recombination between the last two.
CheckReport check_jacobian_concavity(const JacobianTrajectory& tr, double kappa);

// Margins of the weighted Jacobian bound alone, one per grid point.
std::vector<double> jacobian_bound_margins(const JacobianTrajectory& tr, double kappa);

struct RaySampling {
  std::size_t count = 1000;
  std::uint64_t seed = 0;
  Region region;
  double speed_lo = 0.1;
  double speed_hi = 0.0;   // 0: 0.9 * cut time on spheres, 2 elsewhere
  double det_floor = 1e-2; // rays with smaller det(dF_t) are rejected
  int steps = 256;
  int max_attempts = 200;
};

// Draws an admissible ray: S = Q diag(lambda) Q^T, lambda uniform in
// [-0.8, 0.8] / |w|; rejects rays with small determinant or with
// re-parametrized length reaching the model diameter of kappa.
JacobianTrajectory sample_admissible_ray(const ModelSpace& space, const WeightFunction& weight,
                                         const DimensionParams& params, double kappa,
                                         std::mt19937_64& rng, const RaySampling& sampling);

struct JacobianSuiteResult {
  CheckReport riccati;
  CheckReport concavity;
  std::size_t worst_ray = 0;
};

// Monte Carlo over admissible rays, merged by sample index.
JacobianSuiteResult run_jacobian_suite(const ModelSpace& space, const WeightFunction& weight,
                                       const DimensionParams& params, double kappa,
                                       const RaySampling& sampling);

// When the curvature bound fails, searches random rays for a violation of
// the weighted Jacobian bound. Vacuous when the curvature bound holds.
CheckReport falsify_jacobian(const ModelSpace& space, const WeightFunction& weight,
                             const DimensionParams& params, double kappa,
                             const RaySampling& sampling);

// Columns t,det,J,h,l,D,Dbar.
void write_trajectory_csv(std::ostream& os, const JacobianTrajectory& tr);

}  // namespace cdcheck

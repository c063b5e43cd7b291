#include <cmath>

#include <gtest/gtest.h>

#include "cdcheck/errors.hpp"
#include "cdcheck/jacobi.hpp"
#include "generators.hpp"

namespace cdcheck {
namespace {

using testing::Rng;

TransportRay make_ray(Point x, Tangent w, Eigen::MatrixXd S) { return {std::move(x), std::move(w), std::move(S)}; }

TEST(Jacobi, StaticRayIsIdentity) {
  const ModelSpace e = ModelSpace::euclidean(3);
  const TransportRay ray = make_ray(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(0.3, -0.4, 1.0), Eigen::MatrixXd::Zero(3, 3));
  const JacobianTrajectory tr = integrate_jacobi(e, WeightFunction::zero(), validate_params(3, 3.0, 1.0), ray, 64);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    ASSERT_LT((tr.E[i] - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-14);
    ASSERT_NEAR(tr.det[i], 1.0, 1e-14);
    ASSERT_NEAR(tr.J[i], 1.0, 1e-14);
    ASSERT_NEAR(tr.D[i], 1.0, 1e-14);
    ASSERT_NEAR(tr.Dbar[i], 1.0, 1e-14);
  }
}

TEST(Jacobi, ZeroVelocityGivesIdentityTrajectory) {
  const ModelSpace s = ModelSpace::sphere(2);
  const TransportRay ray = make_ray(Eigen::Vector3d(0, 0, 1), Eigen::Vector3d::Zero(), 0.3 * Eigen::MatrixXd::Identity(2, 2));
  const JacobianTrajectory tr = integrate_jacobi(s, WeightFunction::zero(), validate_params(2, 2.0, 1.0), ray);
  EXPECT_EQ(tr.det.back(), 1.0);
  EXPECT_EQ(tr.D.back(), 1.0);
}

TEST(Jacobi, ScalarHessianClosedForm) {
  const ModelSpace e = ModelSpace::euclidean(3);
  for (double lambda : {-0.6, 0.4, 1.5}) {
    const TransportRay ray = make_ray(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(0.2, 0.5, -0.1),
                                      lambda * Eigen::MatrixXd::Identity(3, 3));
    const JacobianTrajectory tr = integrate_jacobi(e, WeightFunction::zero(), validate_params(3, 3.0, 1.0), ray);
    for (std::size_t i = 0; i < tr.size(); ++i) {
      ASSERT_NEAR(tr.det[i], std::pow(1 + lambda * tr.t[i], 3), 1e-10) << lambda;
    }
  }
}

TEST(Jacobi, SphereNormalBlockIsCosine) {
  const ModelSpace s = ModelSpace::sphere(2);
  const double theta = 1.2;
  const TransportRay ray = make_ray(Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(theta, 0, 0), Eigen::MatrixXd::Zero(2, 2));
  const JacobianTrajectory tr = integrate_jacobi(s, WeightFunction::zero(), validate_params(2, 2.0, 1.0), ray);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    ASSERT_NEAR(tr.E[i](0, 0), std::cos(theta * tr.t[i]), 1e-10);
    ASSERT_NEAR(tr.det[i], std::cos(theta * tr.t[i]), 1e-10);
  }
}

TEST(Jacobi, SingularRayRejected) {
  const TransportRay ray = make_ray(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), -2.0 * Eigen::MatrixXd::Identity(2, 2));
  EXPECT_THROW(integrate_jacobi(ModelSpace::euclidean(2), WeightFunction::zero(), validate_params(2, 2.0, 1.0), ray),
               SingularJacobian);
}

TEST(Riccati, ScalarHessianIsStrict) {
  const int n = 3;
  const double lambda = 0.7;
  const TransportRay ray = make_ray(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 0, 0), lambda * Eigen::MatrixXd::Identity(n, n));
  const JacobianTrajectory tr = integrate_jacobi(ModelSpace::euclidean(n), WeightFunction::zero(), validate_params(n, 3.0, 1.0), ray);
  const CheckReport r = check_riccati(tr);
  EXPECT_TRUE(r.passed());
  // h = (n-1) log(1 + lambda t) attains the bound.
  EXPECT_LT(std::abs(r.details["min_margin_h"].get<double>()), 1e-8);
}

TEST(Riccati, StaticRayIsEquality) {
  const TransportRay ray = make_ray(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1), Eigen::MatrixXd::Zero(2, 2));
  const JacobianTrajectory tr = integrate_jacobi(ModelSpace::euclidean(2), WeightFunction::zero(), validate_params(2, 2.0, 1.0), ray);
  const CheckReport r = check_riccati(tr);
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.min_margin, 0.0, 1e-12);
}

TEST(Riccati, SphereCosineWeightPasses) {
  Rng rng(70);
  RaySampling rs;
  const ModelSpace s = ModelSpace::sphere(2);
  const DimensionParams p = validate_params(2, 8.0, 0.5);
  for (int k = 0; k < 20; ++k) {
    const JacobianTrajectory tr = sample_admissible_ray(s, WeightFunction::cosine(0.4), p, 0.1, rng, rs);
    ASSERT_TRUE(check_riccati(tr).passed());
  }
}

TEST(Concavity, FlatScalarHessianIsEquality) {
  const int n = 2;
  const TransportRay ray = make_ray(Eigen::Vector2d(0, 0), Eigen::Vector2d(0.6, 0.8), 0.5 * Eigen::MatrixXd::Identity(n, n));
  const DimensionParams p = validate_params(n, 2.0, 0.3);
  const JacobianTrajectory tr = integrate_jacobi(ModelSpace::euclidean(n), WeightFunction::zero(), p, ray);
  const CheckReport r = check_jacobian_concavity(tr, 0.0);
  EXPECT_TRUE(r.passed());
  EXPECT_LT(std::abs(r.details["min_margin_J"].get<double>()), 1e-9);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.t[i];
    ASSERT_NEAR(std::pow(tr.J[i], 1.0 / n), 1 + 0.5 * t, 1e-10);
  }
}

TEST(Concavity, StaticRayAllEqualities) {
  const TransportRay ray = make_ray(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0), Eigen::MatrixXd::Zero(2, 2));
  const JacobianTrajectory tr = integrate_jacobi(ModelSpace::euclidean(2), WeightFunction::zero(), validate_params(2, 2.0, 1.0), ray);
  const CheckReport r = check_jacobian_concavity(tr, 0.0);
  EXPECT_NEAR(r.min_margin, 0.0, 1e-12);
}

TEST(Concavity, RecombinationIsAlgebraic) {
  Rng rng(71);
  RaySampling rs;
  const ModelSpace h = ModelSpace::hyperbolic(3);
  const DimensionParams p = validate_params(3, 9.0, 0.4);
  for (int k = 0; k < 10; ++k) {
    const JacobianTrajectory tr = sample_admissible_ray(h, WeightFunction::quadratic(0.3), p, -3.0, rng, rs);
    ASSERT_LT(check_jacobian_concavity(tr, -3.0).details["recombination_error"].get<double>(), 1e-9);
  }
}

TEST(Jacobi, StepHalvingConverges) {
  Rng rng(72);
  RaySampling rs;
  rs.steps = 128;
  const ModelSpace s = ModelSpace::sphere(3);
  const DimensionParams p = validate_params(3, 3.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const JacobianTrajectory coarse = sample_admissible_ray(s, WeightFunction::zero(), p, 1.0, rng, rs);
    const JacobianTrajectory fine = integrate_jacobi(s, WeightFunction::zero(), p, coarse.ray, 256);
    for (std::size_t i = 0; i < coarse.size(); ++i) ASSERT_NEAR(coarse.det[i], fine.det[2 * i], 1e-8);
  }
}

TEST(Jacobi, SampledRaysKeepPositiveDistortions) {
  Rng rng(73);
  RaySampling rs;
  const ModelSpace e = ModelSpace::euclidean(3);
  const DimensionParams p = validate_params(3, 10.0, 0.9);
  for (int k = 0; k < 50; ++k) {
    const JacobianTrajectory tr = sample_admissible_ray(e, WeightFunction::quadratic(1.0), p, -2.0, rng, rs);
    ASSERT_GT(*std::min_element(tr.D.begin(), tr.D.end()), 0.0);
    ASSERT_GT(*std::min_element(tr.Dbar.begin(), tr.Dbar.end()), 0.0);
    ASSERT_GE(*std::min_element(tr.det.begin(), tr.det.end()), rs.det_floor);
  }
}

TEST(JacobianSuite, SphereSmallRun) {
  RaySampling rs;
  rs.count = 200;
  rs.seed = 5;
  const JacobianSuiteResult res =
      run_jacobian_suite(ModelSpace::sphere(2), WeightFunction::zero(), validate_params(2, 2.0, 1.0), 1.0, rs);
  EXPECT_TRUE(res.riccati.passed());
  EXPECT_TRUE(res.concavity.passed());
  EXPECT_GE(res.concavity.min_margin, -1e-8);
}

TEST(Falsification, FlatSpaceWithPositiveKappa) {
  RaySampling rs;
  rs.count = 2000;
  rs.seed = 9;
  const CheckReport r =
      falsify_jacobian(ModelSpace::euclidean(2), WeightFunction::zero(), validate_params(2, 2.0, 1.0), 0.2, rs);
  EXPECT_TRUE(r.failed());
  ASSERT_TRUE(r.details.contains("counterexample"));
  EXPECT_LT(r.details["counterexample"]["margin"].get<double>(), -1e-8);
}

TEST(Falsification, SphereAboveAdmissibleKappa) {
  RaySampling rs;
  rs.count = 2000;
  rs.seed = 10;
  const CheckReport r =
      falsify_jacobian(ModelSpace::sphere(2), WeightFunction::zero(), validate_params(2, 2.0, 1.0), 1.1, rs);
  EXPECT_TRUE(r.failed());
}

TEST(Falsification, VacuousWhenCurvatureHolds) {
  RaySampling rs;
  rs.count = 100;
  const CheckReport r =
      falsify_jacobian(ModelSpace::sphere(2), WeightFunction::zero(), validate_params(2, 2.0, 1.0), 1.0, rs);
  EXPECT_EQ(r.verdict, Verdict::kVacuous);
}

}  // namespace
}  // namespace cdcheck

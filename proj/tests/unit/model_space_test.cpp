#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cdcheck/errors.hpp"
#include "cdcheck/model_space.hpp"
#include "generators.hpp"

namespace cdcheck {
namespace {

using testing::Rng;

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

TEST(Geodesic, EuclideanStep) {
  const ModelSpace e = ModelSpace::euclidean(2);
  EXPECT_LT((e.geodesic_point(vec({0, 0}), vec({1, 0}), 2.0) - vec({2, 0})).norm(), 1e-15);
}

TEST(Geodesic, SphereReachesAntipode) {
  const ModelSpace s = ModelSpace::sphere(2);
  const Point north = vec({0, 0, 1});
  for (const Tangent& v : {vec({1, 0, 0}), vec({0.6, 0.8, 0})}) {
    EXPECT_LT((s.geodesic_point(north, v, std::numbers::pi) - vec({0, 0, -1})).norm(), 1e-15);
  }
}

TEST(Geodesic, HyperbolicVerticalLine) {
  const ModelSpace h = ModelSpace::hyperbolic(2);
  EXPECT_LT((h.geodesic_point(vec({0, 1}), vec({0, 1}), 1.0) - vec({0, std::exp(1.0)})).norm(), 1e-14);
}

TEST(Geodesic, UnitSpeedEverywhere) {
  Rng rng(31);
  for (const ModelSpace& sp : {ModelSpace::euclidean(3), ModelSpace::sphere(3, 2.0), ModelSpace::hyperbolic(3, 0.5)}) {
    for (int k = 0; k < 50; ++k) {
      const Point x = sp.random_point(rng);
      const Tangent v = sp.random_unit_tangent(x, rng);
      const double t = testing::uniform(rng, 0.1, 1.5), h = 1e-5;
      const double speed = sp.distance(sp.geodesic_point(x, v, t - h), sp.geodesic_point(x, v, t + h)) / (2 * h);
      ASSERT_NEAR(speed, 1.0, 1e-8) << sp.describe();
    }
  }
}

TEST(LogMap, EuclideanExample) {
  const GeodesicSegment seg = ModelSpace::euclidean(2).log_map(vec({0, 0}), vec({3, 4}));
  EXPECT_NEAR(seg.length, 5.0, 1e-15);
  EXPECT_LT((seg.direction - vec({0.6, 0.8})).norm(), 1e-15);
  EXPECT_TRUE(seg.cut_clear);
}

TEST(LogMap, CoincidentPointsAreDegenerate) {
  const ModelSpace s = ModelSpace::sphere(2);
  const Point x = s.canonical(vec({0.3, -0.2, 0.9}));
  const GeodesicSegment seg = s.log_map(x, x);
  EXPECT_EQ(seg.length, 0.0);
  EXPECT_TRUE(seg.degenerate);
}

TEST(LogMap, RoundTripOnRandomPairs) {
  Rng rng(32);
  for (const ModelSpace& sp : {ModelSpace::euclidean(2), ModelSpace::sphere(2), ModelSpace::sphere(3, 1.7),
                               ModelSpace::hyperbolic(2), ModelSpace::hyperbolic(3, 2.0)}) {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const Point x = sp.random_point(rng);
      const Point y = sp.random_point(rng);
      const GeodesicSegment seg = sp.log_map(x, y);
      worst = std::max(worst, (sp.geodesic_point(x, seg.direction, seg.length) - y).norm());
    }
    EXPECT_LT(worst, 1e-10) << sp.describe();
  }
}

TEST(LogMap, SphereCutLocusRejected) {
  const ModelSpace s = ModelSpace::sphere(2);
  EXPECT_THROW(s.log_map(vec({0, 0, 1}), vec({0, 0, -1})), CutLocusError);
  const Point near = s.geodesic_point(vec({0, 0, 1}), vec({1, 0, 0}), std::numbers::pi - 1e-3);
  EXPECT_TRUE(s.log_map(vec({0, 0, 1}), near).cut_clear);
}

TEST(Model, PointsSatisfyConstraint) {
  Rng rng(33);
  const ModelSpace s = ModelSpace::sphere(4);
  const ModelSpace h = ModelSpace::hyperbolic(3);
  for (int k = 0; k < 200; ++k) {
    ASSERT_NEAR(s.random_point(rng).norm(), 1.0, 1e-12);
    ASSERT_GT(h.random_point(rng)(2), 0.0);
  }
  EXPECT_DOUBLE_EQ(ModelSpace::sphere(2, 2.0).sectional(), 0.25);
  EXPECT_DOUBLE_EQ(ModelSpace::hyperbolic(2, 2.0).sectional(), -0.25);
}

TEST(Model, ParallelTransportIsIsometric) {
  Rng rng(34);
  for (const ModelSpace& sp : {ModelSpace::sphere(3), ModelSpace::hyperbolic(3)}) {
    for (int k = 0; k < 50; ++k) {
      const Point x = sp.random_point(rng);
      const Tangent v = sp.random_unit_tangent(x, rng);
      const Tangent w = sp.random_unit_tangent(x, rng);
      const double t = testing::uniform(rng, 0.1, 1.0);
      const Point y = sp.geodesic_point(x, v, t);
      const Tangent vt = sp.geodesic_velocity(x, v, t);
      const Tangent wt = sp.transport(x, v, t, w);
      ASSERT_NEAR(sp.norm(y, wt), 1.0, 1e-10);
      ASSERT_NEAR(sp.inner(y, wt, vt), sp.inner(x, w, v), 1e-10);
    }
  }
}

}  // namespace
}  // namespace cdcheck

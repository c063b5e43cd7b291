#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "cdcheck/coefficients.hpp"
#include "cdcheck/errors.hpp"
#include "cdcheck/taylor.hpp"
#include "generators.hpp"

namespace cdcheck {
namespace {

struct Probe {
  ModelSpace space;
  WeightFunction weight;
  DimensionParams params;
  double kappa;
  Point x;
  Tangent v;
};

Probe flat_probe() {
  const ModelSpace e = ModelSpace::euclidean(3);
  return {e, WeightFunction::quadratic(0.7), validate_params(3, 10.0, 0.5), -1.0, Eigen::Vector3d(0.2, 0.2, 0.2),
          Eigen::Vector3d(1, 0.5, 0).normalized()};
}

Probe sphere_probe() {
  const ModelSpace s = ModelSpace::sphere(2);
  const Point x = Eigen::Vector3d(std::sin(1.0), 0, std::cos(1.0));
  const Tangent v = s.normalize(x, Eigen::Vector3d(std::cos(1.0), 0.3, -std::sin(1.0)));
  return {s, WeightFunction::cosine(0.3), validate_params(2, -2.0, 0.4), 0.5, x, v};
}

SeriesCheck run(const Probe& p, SeriesTerm term, const std::vector<double>& grid = default_delta_grid()) {
  return check_series(p.space, p.weight, p.params, p.kappa, p.x, p.v, term, grid);
}

TEST(Series, FlatUnweightedRemaindersVanish) {
  const ModelSpace e = ModelSpace::euclidean(2);
  const SeriesCheck s = check_series(e, WeightFunction::zero(), validate_params(2, 5.0, 0.3), 0.0,
                                     Eigen::Vector2d(0.1, 0.2), Eigen::Vector2d(1, 0), SeriesTerm::kApp1);
  for (const auto& c : s.components) {
    EXPECT_TRUE(c.noise_limited) << c.id;
    for (double r : c.remainder) EXPECT_LT(std::abs(r), 1e-14);
  }
  EXPECT_TRUE(s.report.passed());
}

TEST(Series, SecondOrderRemainders) {
  for (const Probe& p : {flat_probe(), sphere_probe()}) {
    for (SeriesTerm term : all_series_terms()) {
      const SeriesCheck s = run(p, term);
      EXPECT_TRUE(s.report.passed()) << to_string(term) << " on " << p.space.describe();
      for (const auto& c : s.components) {
        if (!c.noise_limited) EXPECT_GE(c.slope, kSlopeThreshold) << c.id;
      }
    }
  }
}

TEST(Series, SlopeStableUnderGridTruncation) {
  std::vector<double> shorter = default_delta_grid();
  shorter.erase(shorter.begin());
  for (const Probe& p : {flat_probe(), sphere_probe()}) {
    for (SeriesTerm term : all_series_terms()) {
      const SeriesCheck a = run(p, term), b = run(p, term, shorter);
      for (std::size_t k = 0; k < a.components.size(); ++k) {
        if (a.components[k].noise_limited || b.components[k].noise_limited) continue;
        EXPECT_LT(std::abs(a.components[k].slope - b.components[k].slope), 0.1) << a.components[k].id;
      }
    }
  }
}

// beta_{1/2} at gamma(+-d) = 1 -+ b1 g d + b2 d^2 / 2 + O(d^3). The odd and
// even parts are extracted by Richardson steps and compared with
// b1 = (1 - eps) / ((n - 1) c) and b2 = K + (1 - c) b1^2 g^2, where g is the
// directional derivative of f taken by central differences.
TEST(Series, BetaCoefficientsByExtraction) {
  for (const Probe& p : {flat_probe(), sphere_probe()}) {
    const double h = 1e-4;
    const double g = (p.weight.value(p.space, p.space.geodesic_point(p.x, p.v, h)) -
                      p.weight.value(p.space, p.space.geodesic_point(p.x, -p.v, h))) /
                     (2 * h);
    const double c = p.params.c, eps = p.params.eps;
    const int n = p.params.n;
    const double b1 = (1 - eps) / ((n - 1) * c);
    const double K = p.kappa / c * std::exp(-4 * (1 - eps) / (n - 1) * p.weight.value(p.space, p.x));
    const double b2 = K + (1 - c) * b1 * b1 * g * g;

    auto odd_even = [&](double d) {
      const SeriesCheck s = run(p, SeriesTerm::kApp2, {d});
      const double fwd = s.components[0].exact[0], bwd = s.components[1].exact[0];
      return std::pair{(bwd - fwd) / (2 * d), ((fwd + bwd) / 2 - 1) / (d * d)};
    };
    const auto [o1, e1] = odd_even(0.02);
    const auto [o2, e2] = odd_even(0.01);
    EXPECT_NEAR((4 * o2 - o1) / 3, b1 * g, 1e-6) << p.space.describe();
    EXPECT_NEAR((4 * e2 - e1) / 3, 0.5 * b2, 1e-4) << p.space.describe();
  }
}

TEST(Series, ProductRouteMatchesDisplayedCoefficients) {
  for (const Probe& p : {flat_probe(), sphere_probe()}) {
    const ProductRoute r = app6_product_route(p.space, p.weight, p.params, p.kappa, p.x, p.v);
    EXPECT_LT(r.difference_at, 1e-9);
    EXPECT_NEAR(r.route.a[0], r.displayed.a[0], 1e-14);
    EXPECT_NEAR(r.route.a[1], 0.0, 1e-12);
    EXPECT_NEAR(r.route.a[2], r.displayed.a[2], 1e-9);
  }
}

TEST(Series, Preconditions) {
  const Probe p = flat_probe();
  const DimensionParams eps0 = validate_params(3, 10.0, 0.0);
  EXPECT_THROW(check_series(p.space, p.weight, eps0, p.kappa, p.x, p.v, SeriesTerm::kApp4), PreconditionError);
  EXPECT_NO_THROW(check_series(p.space, p.weight, eps0, p.kappa, p.x, p.v, SeriesTerm::kApp3));
  const Probe s = sphere_probe();
  EXPECT_THROW(check_series(s.space, s.weight, s.params, s.kappa, s.x, s.v, SeriesTerm::kApp1, {0.1, 1.6}), CutLocusError);
  EXPECT_THROW(parse_series_term("app5"), ConfigError);
  EXPECT_EQ(parse_series_term("app6"), SeriesTerm::kApp6);
}

TEST(Series, CsvLayout) {
  const SeriesCheck s = run(flat_probe(), SeriesTerm::kApp3);
  std::ostringstream os;
  write_series_csv(os, s.components[0]);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "delta,exact,series,remainder");
}

TEST(Theta, Cases) {
  EXPECT_THROW(theta_eps(validate_params(3, 5.0, 0.0), 1.0), PreconditionError);
  EXPECT_THROW(theta_eps(validate_params(3, 3.0, 0.5), 1.0), PreconditionError);
  EXPECT_EQ(theta_eps(validate_params(3, 3.0, 0.5), 0.0), 0.0);
  const DimensionParams p = validate_params(3, 5.0, 0.5);
  EXPECT_NEAR(theta_eps(p, 2.0), -(0.5 - 2.0) * 2.0 / (2 * 0.5), 1e-15);
}

TEST(FIdentity, HoldsOnGrid) {
  testing::Rng rng(120);
  for (int k = 0; k < 40; ++k) {
    const DimensionParams p = testing::random_params(rng);
    if (p.is_n_equal() || p.eps0 == 0.0 || !std::isfinite(p.eps0)) continue;
    const double g = testing::uniform(rng, -2, 2);
    std::vector<double> thetas;
    for (int j = -10; j <= 10; ++j) thetas.push_back(0.3 * j);
    EXPECT_TRUE(check_F_identity(p, g, thetas).passed());
  }
}

// At theta = theta_eps the square vanishes; at eps = eps0 so does theta.
TEST(FIdentity, DistinguishedPoints) {
  const DimensionParams p = validate_params(3, 7.0, 0.8);
  const double g = 1.3;
  EXPECT_NEAR(F_theta(p, theta_eps(p, g), g), -(p.c + 1) * g * g / (7.0 - 3), 1e-12);
  const DimensionParams q = validate_params(3, 0.0, 1.0 / 3);
  ASSERT_NEAR(q.eps0, 1.0 / 3, 1e-15);
  EXPECT_NEAR(theta_eps(q, g), 0.0, 1e-15);
  EXPECT_NEAR(F_theta(q, 0.0, g), -(q.c + 1) * g * g / (0.0 - 3), 1e-12);
}

TEST(FIdentity, Preconditions) {
  EXPECT_THROW(check_F_identity(validate_params(3, 3.0, 0.5), 1.0, {0.0}), PreconditionError);
  EXPECT_THROW(check_F_identity(validate_params(3, 1.0, 0.0), 1.0, {0.0}), PreconditionError);
}

TEST(LimitBound, HoldsAlongGeodesics) {
  for (const Probe& p : {flat_probe(), sphere_probe()}) {
    const CheckReport r = check_limit_bound(p.space, p.weight, p.params, 0.5, p.x, p.v, 1.0, 12);
    EXPECT_TRUE(r.passed()) << p.space.describe() << " " << r.min_margin;
    EXPECT_EQ(r.samples(), 13u);
  }
  const Probe s = sphere_probe();
  EXPECT_THROW(check_limit_bound(s.space, s.weight, s.params, 0.5, s.x, s.v, 3.2), CutLocusError);
  EXPECT_THROW(check_limit_bound(s.space, s.weight, s.params, 1.0, s.x, s.v, 1.0), ConfigError);
}

TEST(LimitBound, ConstantWeightIsExact) {
  const ModelSpace h = ModelSpace::hyperbolic(2);
  testing::Rng rng(4);
  const Point x = h.random_point(rng);
  const Tangent v = h.random_unit_tangent(x, rng);
  const CheckReport r =
      check_limit_bound(h, WeightFunction::constant(0.4), validate_params(2, 5.0, 0.2), 0.3, x, v, 2.0, 6);
  for (const auto& row : r.details["rows"]) EXPECT_LT(row["lhs"].get<double>(), 1e-13);
}

TEST(Limits, ExtrapolatedCoefficients) {
  for (const Probe& p : {flat_probe(), sphere_probe()}) {
    const Point y = p.space.geodesic_point(p.x, p.v, 0.5);
    const CheckReport r = check_limits(p.space, p.weight, p.params, p.kappa, p.x, y, {});
    EXPECT_TRUE(r.passed()) << p.space.describe() << " " << r.min_margin;
  }
}

}  // namespace
}  // namespace cdcheck

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "cdcheck/density.hpp"
#include "cdcheck/errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

namespace cdcheck {
namespace {

using testing::Quantiles;
using testing::Rng;
using AxisPtr = std::shared_ptr<const AxisMeasure>;

const double kLog4Pi = std::log(4 * std::numbers::pi);

AxisPtr flat_axis(const char* weight = "zero", int n = 2) {
  return AxisMeasure::make(ModelSpace::euclidean(n), WeightFunction::parse(weight));
}

AxisPtr round_axis() { return AxisMeasure::make(ModelSpace::sphere(2), WeightFunction::constant(kLog4Pi)); }

TEST(Axis, RejectsUnsupportedConfigurations) {
  EXPECT_THROW(AxisMeasure::make(ModelSpace::hyperbolic(2), WeightFunction::zero()), ConfigError);
  EXPECT_THROW(AxisMeasure::make(ModelSpace::euclidean(2), WeightFunction::custom("c", [](const Eigen::VectorXd&) { return 0.0; })),
               ConfigError);
}

TEST(Axis, RoundSphereIsProbability) {
  const AxisPtr axis = round_axis();
  std::vector<double> w;
  for (double s : linspace(0, std::numbers::pi, 4097)) w.push_back(axis->density(s));
  EXPECT_NEAR(simpson(w, std::numbers::pi / 4096), 1.0, 1e-12);
}

TEST(Field, RejectsBadGrids) {
  const AxisPtr axis = flat_axis();
  EXPECT_THROW(DensityField(axis, 0, 1, std::vector<double>(6, 1.0)), ConfigError);
  EXPECT_THROW(DensityField(axis, 1, 0, std::vector<double>(5, 1.0)), ConfigError);
  std::vector<double> neg(5, 1.0);
  neg[2] = -0.1;
  EXPECT_THROW(DensityField(axis, 0, 1, neg), ConfigError);
}

TEST(Field, CsvRoundTrip) {
  const AxisPtr axis = flat_axis("linear(0.4)");
  const DensityField rho = DensityField::from_function(axis, -1, 2, [](double s) { return 1 + 0.5 * std::sin(s); }, 6);
  std::stringstream ss;
  rho.write_csv(ss);
  EXPECT_EQ(ss.str().substr(0, 6), "x,rho\n");
  const DensityField back = DensityField::read_csv(ss, axis);
  ASSERT_EQ(back.size(), rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) EXPECT_DOUBLE_EQ(back[i], rho[i]);
  std::stringstream bad("x,y\n0,1\n");
  EXPECT_THROW(DensityField::read_csv(bad, axis), ConfigError);
}

TEST(Transport, UniformShift) {
  const AxisPtr axis = flat_axis();
  const auto one = [](double) { return 1.0; };
  const DensityField a = DensityField::from_function(axis, 0, 1, one, 8);
  const DensityField b = DensityField::from_function(axis, 2, 3, one, 8);
  const MonotoneTransport map(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(map.map_table()[i], a.node(i) + 2, 1e-12);
  EXPECT_NEAR(map.w2(), 2.0, 1e-12);
  for (double t : {0.25, 0.5, 0.9}) {
    const DensityField mid = map.interpolate(t);
    EXPECT_NEAR(mid.lo(), 2 * t, 1e-12);
    EXPECT_NEAR(mid.hi(), 1 + 2 * t, 1e-12);
    for (std::size_t i = 0; i < mid.size(); ++i) ASSERT_NEAR(mid[i], 1.0, 1e-10);
  }
}

TEST(Transport, SelfMapIsIdentity) {
  const AxisPtr axis = round_axis();
  const DensityField rho = DensityField::from_function(axis, 0.2, 2.5, [](double s) { return 1 + 0.4 * std::cos(3 * s); }, 9);
  const MonotoneTransport map(rho, rho);
  for (std::size_t i = 0; i < rho.size(); ++i) ASSERT_NEAR(map.map_table()[i], rho.node(i), 1e-10);
  const DensityField mid = map.interpolate(0.5);
  for (std::size_t i = 0; i < mid.size(); ++i) ASSERT_NEAR(mid[i], rho[i], 1e-8);
}

TEST(Transport, GaussianPairAgainstParticles) {
  const AxisPtr axis = flat_axis("quadratic(1)");
  auto f0 = [](double s) { return std::exp(-(s + 1) * (s + 1)); };
  auto f1 = [](double s) { return 1 + 0.3 * std::sin(3 * s); };
  const DensityField rho0 = DensityField::from_function(axis, -2.5, 1.0, f0, 11);
  const DensityField rho1 = DensityField::from_function(axis, -0.5, 2.5, f1, 11);
  const MonotoneTransport map(rho0, rho1);

  // Axis weight e^{-s^2/2} times the transverse mass of e^{-y^2/2} on [0, 1].
  const double transverse = std::sqrt(std::numbers::pi / 2) * std::erf(std::sqrt(0.5));
  auto weight_integral = [&](double a, double b) {
    return transverse * std::sqrt(std::numbers::pi / 2) * (std::erf(b / std::sqrt(2.0)) - std::erf(a / std::sqrt(2.0)));
  };
  const Quantiles q0([&](double s) { return f0(s) * std::exp(-s * s / 2); }, -2.5, 1.0);
  const Quantiles q1([&](double s) { return f1(s) * std::exp(-s * s / 2); }, -0.5, 2.5);

  const int K = 4000;
  for (double t : {0.3, 0.7}) {
    const DensityField mid = map.interpolate(t);
    double worst = 0.0;
    for (int k = 10; k < K - 10; k += 7) {
      const double za = (1 - t) * q0(double(k) / K) + t * q1(double(k) / K);
      const double zb = (1 - t) * q0(double(k + 1) / K) + t * q1(double(k + 1) / K);
      const double particle = (1.0 / K) / weight_integral(za, zb);
      worst = std::max(worst, std::abs(mid.value(0.5 * (za + zb)) - particle));
    }
    EXPECT_LT(worst, 1e-4) << "t = " << t;
  }
}

TEST(Transport, MonotoneAmpereConsistency) {
  const AxisPtr axis = round_axis();
  const DensityField rho0 = DensityField::from_function(axis, 0.3, 2.0, [](double s) { return 1 + 0.5 * std::cos(2 * s); }, 10);
  const DensityField rho1 = DensityField::from_function(axis, 1.0, 2.9, [](double s) { return std::exp(-(s - 2) * (s - 2)); }, 10);
  const MonotoneTransport map(rho0, rho1);
  for (double t : {0.2, 0.5, 0.8}) {
    const DensityField mid = map.interpolate(t);
    double worst = 0.0;
    for (std::size_t i = 16; i + 16 < rho0.size(); i += 8) {
      const double lhs = rho0[i];
      const double rhs = mid.value(map.displacement(t, rho0.node(i))) * map.jacobian_at(t, i);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, lhs));
    }
    EXPECT_LT(worst, 1e-6) << "t = " << t;
  }
}

TEST(Transport, MassIsConservedAndEndpointsAreRecovered) {
  const AxisPtr axis = flat_axis("linear(0.5)");
  const DensityField rho0 = DensityField::from_function(axis, -1, 1, [](double s) { return 2 + std::sin(4 * s); }, 10);
  const DensityField rho1 = DensityField::from_function(axis, 0, 3, [](double s) { return std::exp(-s); }, 10);
  const MonotoneTransport map(rho0, rho1);
  for (double t : linspace(0.05, 0.95, 19)) ASSERT_NEAR(map.interpolate(t).mass(), 1.0, 1e-7) << t;

  auto l1 = [](const DensityField& a, const DensityField& b) {
    double lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi()), sum = 0.0;
    const int m = 20000;
    for (int i = 0; i <= m; ++i) {
      const double s = lo + (hi - lo) * i / m;
      sum += std::abs(a.mass_density(s) - b.mass_density(s));
    }
    return sum * (hi - lo) / m;
  };
  double prev0 = INFINITY, prev1 = INFINITY;
  for (double t : {1e-1, 1e-2, 1e-3}) {
    const double d0 = l1(map.interpolate(t), rho0);
    const double d1 = l1(map.interpolate(1 - t), rho1);
    EXPECT_LT(d0, prev0);
    EXPECT_LT(d1, prev1);
    prev0 = d0;
    prev1 = d1;
  }
  EXPECT_LT(prev0, 1e-2);
  EXPECT_LT(prev1, 1e-2);
}

TEST(Entropy, UniformOnProbabilityIsZero) {
  const DimensionParams p = validate_params(2, 5.0, 0.5);
  const DensityField rho = DensityField::uniform(round_axis(), 10);
  EXPECT_NEAR(entropy_functional(rho, p, EntropyFunctional::renyi_entropy(p)).value, 0.0, 1e-12);
  EXPECT_NEAR(entropy_functional(rho, p, EntropyFunctional::boltzmann()).value, 0.0, 1e-12);
}

TEST(Entropy, ClassicalRenyiFormWhenNEqualsN) {
  const DimensionParams p = validate_params(2, 2.0, 0.77);
  const double a = 0.3;
  const DensityField rho = DensityField::from_function(round_axis(), 0, std::numbers::pi,
                                                       [a](double s) { return 1 + a * std::cos(s); }, 12);
  // With m = sin(s) ds / 2, int rho^{1 - 1/n} dm by an independent Simpson sum.
  const int m = 1 << 14;
  std::vector<double> vals;
  for (double s : linspace(0, std::numbers::pi, m + 1)) vals.push_back(std::pow(1 + a * std::cos(s), 0.5) * std::sin(s) / 2);
  const double direct = 2.0 - 2.0 * simpson(vals, std::numbers::pi / m);
  EXPECT_NEAR(entropy_functional(rho, p, EntropyFunctional::renyi_entropy(p)).value, direct, 1e-9);
}

TEST(Entropy, HalfHeightOnDoubledSupport) {
  const DimensionParams p = validate_params(2, 6.0, 0.5);
  const DensityField rho = DensityField::from_function(flat_axis(), 0, 2, [](double) { return 1.0; }, 8);
  ASSERT_NEAR(rho[3], 0.5, 1e-14);
  const double pp = (p.c + 1) / p.c;
  EXPECT_NEAR(entropy_functional(rho, p, EntropyFunctional::renyi_entropy(p)).value, pp * (1 - std::pow(2.0, 1 / pp)), 1e-12);
}

TEST(Entropy, HeavyTailedReferenceRejectsNonRenyi) {
  const DimensionParams p = validate_params(2, 2.0, 1.0);
  const AxisPtr axis = flat_axis();
  EXPECT_FALSE(moment_condition_holds(*axis, p));
  const DensityField rho = DensityField::from_function(axis, 0, 1, [](double) { return 1.0; }, 6);
  EXPECT_THROW(entropy_functional(rho, p, EntropyFunctional::boltzmann()), IntegrabilityError);
  EXPECT_NO_THROW(entropy_functional(rho, p, EntropyFunctional::renyi_entropy(p)));
  EXPECT_TRUE(moment_condition_holds(*flat_axis("quadratic(1)"), p));
  EXPECT_TRUE(moment_condition_holds(*round_axis(), p));
}

TEST(Entropy, JensenLowerBoundOnOscillations) {
  const DimensionParams p = validate_params(2, 4.0, 0.2);
  const EntropyFunctional H = EntropyFunctional::renyi_entropy(p);
  const AxisPtr axis = flat_axis();
  const double limit = entropy_functional(DensityField::from_function(axis, 0, 1, [](double) { return 1.0; }, 12), p, H).value;
  for (int k = 1; k <= 8; ++k) {
    const DensityField rho = DensityField::from_function(
        axis, 0, 1, [k](double s) { return 1 + 0.5 * std::sin(2 * std::numbers::pi * k * s); }, 12);
    ASSERT_GE(entropy_functional(rho, p, H).value, limit - 1e-12) << k;
  }
}

TEST(DcClass, RenyiAlwaysAdmissible) {
  Rng rng(80);
  for (int k = 0; k < 30; ++k) {
    const DimensionParams p = testing::random_params(rng);
    const CheckReport r = dc_membership(EntropyFunctional::renyi_entropy(p).U, p);
    ASSERT_TRUE(r.passed()) << r.min_margin << " c = " << p.c;
  }
}

TEST(DcClass, BoltzmannAdmissible) {
  for (double N : {2.0, 4.0, 50.0}) {
    const DimensionParams p = validate_params(2, N, 1.0);
    EXPECT_TRUE(dc_membership(EntropyFunctional::boltzmann().U, p).passed()) << N;
  }
}

TEST(DcClass, ConcaveIntegrandsRejected) {
  const DimensionParams p = validate_params(3, 5.0, 0.5);
  EXPECT_TRUE(dc_membership([](double r) { return -r * r; }, p).failed());
  EXPECT_TRUE(dc_membership([](double r) { return std::sqrt(r); }, p).failed());
  EXPECT_TRUE(dc_membership([](double r) { return r * r + 1.0; }, p).failed());
}

TEST(Fisher, VanishesOnReference) {
  const DimensionParams p = validate_params(2, 3.0, 0.5);
  EXPECT_NEAR(fisher_information(DensityField::uniform(round_axis(), 10), p), 0.0, 1e-14);
}

TEST(Fisher, SmallAmplitudeExpansion) {
  const DimensionParams p = validate_params(2, 3.0, 0.5);
  const double q = 1 / (p.c + 1), e = 2 * q - 3;
  for (double a : {0.02, 0.05}) {
    const DensityField rho = DensityField::from_function(round_axis(), 0, std::numbers::pi,
                                                         [a](double s) { return 1 + a * std::cos(s); }, 12);
    const double series = q * q * a * a * (2.0 / 3 + e * (e - 1) / 2 * (2.0 / 15) * a * a);
    EXPECT_NEAR(fisher_information(rho, p), series, 2e-9) << a;
  }
}

TEST(Fisher, GridRefinementIsStable) {
  const DimensionParams p = validate_params(2, 3.0, 0.5);
  auto fn = [](double s) { return 1 + 0.2 * std::cos(s); };
  const double a = fisher_information(DensityField::from_function(round_axis(), 0, std::numbers::pi, fn, 10), p);
  const double b = fisher_information(DensityField::from_function(round_axis(), 0, std::numbers::pi, fn, 11), p);
  EXPECT_LT(std::abs(a - b), 1e-6);
}

}  // namespace
}  // namespace cdcheck

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cdcheck/errors.hpp"
#include "cdcheck/params.hpp"
#include "generators.hpp"

namespace cdcheck {
namespace {

using testing::Rng;

TEST(Comparison, SatisfiesOdeAcrossKappa) {
  for (double kappa : {1.0, 0.0, -1.0}) {
    const double h = 1e-3;
    double worst = 0.0;
    for (double s = h; s <= 10.0 - h; s += 0.01) {
      const double d2 = (s_kappa(kappa, s + h) - 2 * s_kappa(kappa, s) + s_kappa(kappa, s - h)) / (h * h);
      const double scale = std::max(1.0, std::abs(s_kappa(kappa, s)));
      worst = std::max(worst, std::abs(d2 + kappa * s_kappa(kappa, s)) / scale);
    }
    EXPECT_LT(worst, 1e-6) << "kappa " << kappa;
    EXPECT_EQ(s_kappa(kappa, 0.0), 0.0);
    EXPECT_NEAR(c_kappa(kappa, 0.0), 1.0, 1e-15);
  }
}

TEST(Comparison, DerivativeMatchesDifferenceQuotient) {
  for (double kappa : {2.0, 0.0, -3.0}) {
    for (double s : {0.1, 0.7, 1.3}) {
      const double h = 1e-6;
      const double fd = (s_kappa(kappa, s + h) - s_kappa(kappa, s - h)) / (2 * h);
      EXPECT_NEAR(c_kappa(kappa, s), fd, 1e-8);
    }
  }
}

TEST(Comparison, SeriesBranchIsContinuous) {
  for (double kappa : {1e-9, -1e-9, 0.5}) {
    for (double s : {1e-5, 1e-4, 1e-3}) {
      const double closed = kappa > 0 ? std::sin(std::sqrt(kappa) * s) / std::sqrt(kappa)
                                      : std::sinh(std::sqrt(-kappa) * s) / std::sqrt(-kappa);
      EXPECT_NEAR(s_kappa(kappa, s), closed, 1e-15);
    }
  }
}

TEST(Comparison, DiameterValues) {
  EXPECT_DOUBLE_EQ(diam_kappa(4.0), std::numbers::pi / 2);
  EXPECT_DOUBLE_EQ(diam_kappa(std::numbers::pi * std::numbers::pi), 1.0);
  EXPECT_TRUE(std::isinf(diam_kappa(0.0)));
  EXPECT_TRUE(std::isinf(diam_kappa(-1.0)));
}

TEST(Params, ReductionsOnRandomDimensions) {
  Rng rng(20);
  for (int k = 0; k < 20; ++k) {
    const int n = testing::uniform_int(rng, 2, 9);
    const double Nbig = testing::uniform(rng, n + 0.5, 40.0);
    const double Nsmall = testing::uniform(rng, -20.0, 0.9);

    EXPECT_NEAR(validate_params(n, Nbig, 1.0).c, 1.0 / (Nbig - 1.0), 1e-14);
    EXPECT_DOUBLE_EQ(validate_params(n, 1.0, 0.0).c, 1.0 / (n - 1.0));
    const double eps0 = (Nsmall - 1.0) / (Nsmall - n);
    EXPECT_NEAR(validate_params(n, Nsmall, eps0).c, 1.0 / (n - Nsmall), 1e-15);
  }
}

TEST(Params, RejectsForbiddenDimensions) {
  EXPECT_THROW(validate_params(1, 3.0, 0.0), DimensionError);
  EXPECT_THROW(validate_params(3, 2.0, 0.5), DimensionError);
  EXPECT_THROW(validate_params(3, 1.5, 0.0), DimensionError);
  EXPECT_NO_THROW(validate_params(3, 3.0, 5.0));
  EXPECT_NO_THROW(validate_params(3, 1.0, 0.0));
}

TEST(Params, RejectsEpsOutsideRange) {
  EXPECT_THROW(validate_params(2, ExtendedReal::infinity(), 1.0), RangeError);
  EXPECT_THROW(validate_params(2, 1.0, 0.1), RangeError);
  // eps0 = 9/8 for (n, N) = (2, 10).
  EXPECT_NO_THROW(validate_params(2, 10.0, 1.06));
  EXPECT_THROW(validate_params(2, 10.0, 1.07), RangeError);
  EXPECT_THROW(validate_params(2, 10.0, NAN), RangeError);
}

TEST(Params, CoefficientStaysInUnitRange) {
  Rng rng(21);
  for (int k = 0; k < 2000; ++k) {
    const DimensionParams p = testing::random_params(rng);
    ASSERT_GT(p.c, 0.0);
    ASSERT_LE(p.c, 1.0 / (p.n - 1) + 1e-15);
    ASSERT_NEAR(p.c_ratio(), p.c / (p.c + 1), 1e-15);
  }
}

TEST(Params, InfiniteDimensionLimit) {
  const DimensionParams inf = validate_params(3, ExtendedReal::infinity(), 0.4);
  const DimensionParams big = validate_params(3, 1e9, 0.4);
  EXPECT_NEAR(inf.c, big.c, 1e-8);
  EXPECT_EQ(inf.inverse_gap(), 0.0);
  EXPECT_EQ(ExtendedReal::infinity().to_string(), "inf");
}

}  // namespace
}  // namespace cdcheck

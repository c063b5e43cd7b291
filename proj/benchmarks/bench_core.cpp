#include <cmath>
#include <numbers>
#include <random>

#include <benchmark/benchmark.h>

#include "cdcheck/coefficients.hpp"
#include "cdcheck/density.hpp"
#include "cdcheck/inequalities.hpp"
#include "cdcheck/jacobi.hpp"
#include "cdcheck/ot.hpp"
#include "cdcheck/reparam.hpp"
#include "cdcheck/taylor.hpp"

using namespace cdcheck;

static void BM_SKappa(benchmark::State& state) {
  double s = 0.0;
  for (auto _ : state) {
    s += 1e-3;
    benchmark::DoNotOptimize(s_kappa(-0.7, s));
  }
}
BENCHMARK(BM_SKappa);

static void BM_ReparamDistance(benchmark::State& state) {
  const ModelSpace sphere = ModelSpace::sphere(3);
  const WeightFunction w = WeightFunction::cosine(0.4);
  const DimensionParams p = validate_params(3, 8.0, 0.3);
  std::mt19937_64 rng(1);
  const Point x = sphere.random_point(rng);
  const Point y = sphere.geodesic_point(x, sphere.random_unit_tangent(x, rng), 1.2);
  for (auto _ : state) benchmark::DoNotOptimize(reparam_distance(sphere, w, p, x, y).value);
}
BENCHMARK(BM_ReparamDistance);

static void BM_JacobiIntegration(benchmark::State& state) {
  const ModelSpace e = ModelSpace::euclidean(3);
  const WeightFunction w = WeightFunction::quadratic(1.0);
  const DimensionParams p = validate_params(3, 10.0, 0.9);
  const TransportRay ray{Eigen::Vector3d(0.1, 0.2, -0.1), Eigen::Vector3d(0.5, 0.3, 0.2),
                         Eigen::Matrix3d::Identity() * 0.2};
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_jacobi(e, w, p, ray, steps).h.back());
}
BENCHMARK(BM_JacobiIntegration)->Arg(64)->Arg(256)->Arg(1024);

static void BM_DiscreteOt(benchmark::State& state) {
  const ModelSpace s = ModelSpace::sphere(2);
  std::mt19937_64 rng(2);
  const auto size = static_cast<std::size_t>(state.range(0));
  std::vector<Point> a, b;
  for (std::size_t k = 0; k < size; ++k) {
    a.push_back(s.random_point(rng));
    b.push_back(s.random_point(rng));
  }
  const DiscreteMeasure mu = DiscreteMeasure::uniform(a), nu = DiscreteMeasure::uniform(b);
  for (auto _ : state) benchmark::DoNotOptimize(solve_discrete_ot(mu, nu, s).cost);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DiscreteOt)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_MonotoneTransport(benchmark::State& state) {
  const auto axis = AxisMeasure::make(ModelSpace::euclidean(2), WeightFunction::quadratic(1.0));
  const int cells = static_cast<int>(state.range(0));
  const DensityField a = DensityField::from_function(axis, -2, 1, [](double s) { return std::exp(-(s + 1) * (s + 1)); }, cells);
  const DensityField b = DensityField::from_function(axis, -0.5, 2.5, [](double s) { return 1 + 0.3 * std::sin(3 * s); }, cells);
  for (auto _ : state) benchmark::DoNotOptimize(MonotoneTransport(a, b).w2());
}
BENCHMARK(BM_MonotoneTransport)->DenseRange(8, 14, 2);

static void BM_TwcdPair(benchmark::State& state) {
  const auto axis = AxisMeasure::make(ModelSpace::euclidean(2), WeightFunction::quadratic(1.0));
  const DimensionParams p = validate_params(2, 10.0, 0.5);
  const int cells = static_cast<int>(state.range(0));
  const DensityField a = DensityField::from_function(axis, -1, 0, [](double) { return 1.0; }, cells);
  const DensityField b = DensityField::from_function(axis, 0.5, 2, [](double) { return 1.0; }, cells);
  const EntropyFunctional U = EntropyFunctional::renyi_entropy(p);
  for (auto _ : state) benchmark::DoNotOptimize(check_twcd(a, b, p, -0.5, U, default_t_grid()).min_margin);
}
BENCHMARK(BM_TwcdPair)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_SeriesApp6(benchmark::State& state) {
  const ModelSpace s = ModelSpace::sphere(2);
  const DimensionParams p = validate_params(2, 4.0, 0.7);
  const Point x = Eigen::Vector3d(std::sin(1.0), 0, std::cos(1.0));
  const Tangent v = s.normalize(x, Eigen::Vector3d(std::cos(1.0), 0.3, -std::sin(1.0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(check_series(s, WeightFunction::cosine(0.5), p, 0.5, x, v, SeriesTerm::kApp6).report.min_margin);
}
BENCHMARK(BM_SeriesApp6)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

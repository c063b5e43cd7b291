#pragma once

// Shared numerical plumbing: adaptive quadrature, polynomial extrapolation,
// finite-difference stencils, reproducible random streams and a small
// deterministic parallel loop.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace cdcheck {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

// Adaptive Simpson with local Richardson correction. Terminates a panel when
// |S_left + S_right - S_whole| <= 15 * tol, where tol is rel_tol times the
// magnitude of the coarse whole-interval estimate (with an absolute floor).
QuadratureResult adaptive_simpson(const std::function<double(double)>& f,
                                  double a, double b, double rel_tol = 1e-10,
                                  int max_depth = 30);

struct ExtrapolationResult {
  double value = 0.0;
  double error = 0.0;  // difference of the two highest-order estimates
};

// Polynomial (Neville) extrapolation of samples y(h_k) to h = 0.
ExtrapolationResult extrapolate_to_zero(std::span<const double> h,
                                        std::span<const double> y);

// Five-point central stencils on a uniform grid; valid for 2 <= i < size-2.
double five_point_first(std::span<const double> v, std::size_t i, double step);
double five_point_second(std::span<const double> v, std::size_t i, double step);

// Least-squares slope of log|y| against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Independent stream for sample `index` under `seed`; identical regardless of
// which worker evaluates the sample.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

// Worker count: CDCHECK_THREADS if set and positive, else hardware threads.
unsigned worker_count();

// Runs body(i) for i in [0, count) across worker_count() threads. Bodies must
// only write to slots they own (typically results[i]).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

// FNV-1a 64-bit, rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace cdcheck

#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "cdcheck/density.hpp"
#include "cdcheck/params.hpp"
#include "cdcheck/report.hpp"

namespace cdcheck {

// 0.1, 0.2, ..., 0.9
std::vector<double> default_t_grid();

// Displacement convexity along the monotone interpolation from rho0 to rho1:
// per t, margin = (beta-weighted right-hand side) - U_m(mu_t). Details carry
// the t, lhs, rhs arrays and lhs_direct, the entropy of the resampled mu_t.
CheckReport check_twcd(const DensityField& rho0, const DensityField& rho1, const DimensionParams& params,
                       double kappa, const EntropyFunctional& U, const std::vector<double>& t_grid,
                       double tolerance = 1e-6);

// Classical CD((N-1) kappa, N) Renyi check for f = 0 on a slab, coded with
// the distortion coefficients tau directly. Same layout as check_twcd.
CheckReport check_classical_renyi(const DensityField& rho0, const DensityField& rho1, double N, double kappa,
                                  const std::vector<double>& t_grid, double tolerance = 1e-6);

// Columns t,lhs,rhs,margin.
void write_twcd_csv(std::ostream& os, const CheckReport& report);

enum class SetShape { kBall, kInterval };

// Ball (Euclidean, constant weight) or slab interval [lo, hi] x [0,1]^{n-1}.
struct BmSet {
  SetShape shape = SetShape::kBall;
  Point center;
  double radius = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  static BmSet ball(Point center, double radius);
  static BmSet interval(double lo, double hi);
};

struct RegionPair {
  BmSet X;
  BmSet Y;
  double t = 0.5;
};

struct BmOptions {
  int grid = 32;            // distance samples (balls) or x_1, y_1 samples (intervals)
  int transverse_grid = 8;  // transverse offsets for intervals
  double tolerance = -1.0;  // < 0: 1e-10 for balls, 1e-6 for intervals
};

// m(Z_t)^q >= (1-t) inf beta_{1-t}^q m(X)^q + t inf beta_t^q m(Y)^q with
// q = c/(c+1). Infima are sampled on a grid and on its refinement; the
// finer value is used and the gap is reported. RegionError for shapes
// outside the supported cases.
CheckReport check_brunn_minkowski(const RegionPair& sets, const ModelSpace& space, const WeightFunction& weight,
                                  const DimensionParams& params, double kappa, const BmOptions& options = {});

// p-mean M_t^p(a, b); 0 when ab = 0, geometric mean at p = 0, min / max at
// p = -inf / +inf.
double p_mean(double a, double b, double t, double p);
// cp / ((1+c)p + c); -inf at p = -c/(c+1).
double interpolation_exponent(double p, double c);

struct InterpolationOptions {
  std::size_t hypothesis_samples = 10000;
  std::uint64_t seed = 0;
  int log2_cells = 8;       // grid of the constructed psi
  int transverse_grid = 6;  // samples of |x_perp - y_perp|
  double inflation = 1e-3;  // relative safety factor of the constructed psi
  double tolerance = 1e-6;
};

// Interpolation inequality on a slab whose weight depends on x_1 only.
// psi0, psi1 extend as psi(x_1) on the unit transverse cube. When psi is
// null the smallest admissible psi is constructed by a sup-convolution on a
// grid. The pointwise hypothesis is sampled first; HypothesisError if it
// fails. PreconditionError for p < -c/(c+1).
CheckReport check_interpolation(const DensityField& psi0, const DensityField& psi1, const DensityField* psi,
                                double t, double p, const DimensionParams& params, double kappa,
                                const InterpolationOptions& options = {});

// HWI and log-Sobolev inequalities for rho relative to a probability
// reference measure. Margins: [hwi, lsi]. PreconditionError names the
// failed hypothesis.
CheckReport check_hwi_lsi(const DensityField& rho, const DimensionParams& params, double kappa, double delta,
                          double tolerance = 1e-5);

// Transport-energy inequality with the monotone coupling of (mu, m).
CheckReport check_transport_energy(const DensityField& rho, const DimensionParams& params, double kappa,
                                   double tolerance = 1e-5);

// ab <= a log a - 2a + e^{b+1} on a grid of a in [1e-6, 1e3], b in [-10, 5].
CheckReport check_young_inequality(int grid = 64);

}  // namespace cdcheck

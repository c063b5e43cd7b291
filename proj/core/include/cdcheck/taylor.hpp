#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "cdcheck/model_space.hpp"
#include "cdcheck/params.hpp"
#include "cdcheck/report.hpp"
#include "cdcheck/weight.hpp"

namespace cdcheck {

// Polynomial in delta truncated after delta^2.
struct Series2 {
  std::array<double, 3> a{0.0, 0.0, 0.0};

  double operator()(double delta) const { return a[0] + delta * (a[1] + delta * a[2]); }
  Series2 operator+(const Series2& o) const;
  Series2 operator*(const Series2& o) const;
  Series2 operator*(double s) const;
  // (a0 + a1 d + a2 d^2)^p for a0 > 0.
  Series2 pow(double p) const;
};

// Terms of the second-order expansion around x along the geodesic with unit
// velocity v:
//   app1  half and full re-parametrized distances between gamma(delta), gamma(-delta)
//   app2  beta_{1/2} in both directions
//   app3  exp(-f(gamma(-+delta)) + f(x))
//   app4  (1 +- theta delta)^n
//   app6  the assembled 1/2-mean of the two Brunn-Minkowski factors
enum class SeriesTerm { kApp1, kApp2, kApp3, kApp4, kApp6 };

const char* to_string(SeriesTerm term);
SeriesTerm parse_series_term(const std::string& id);
std::vector<SeriesTerm> all_series_terms();

// One scalar component of a term sampled on a delta grid.
struct SeriesComponent {
  std::string id;
  std::vector<double> delta;
  std::vector<double> exact;
  std::vector<double> series;
  std::vector<double> remainder;
  double slope = 0.0;        // fitted on remainders above the noise floor
  std::size_t fitted = 0;    // number of points used in the fit
  bool noise_limited = false;
};

struct SeriesCheck {
  SeriesTerm term = SeriesTerm::kApp1;
  std::vector<SeriesComponent> components;
  CheckReport report;  // margins: slope - 2.8 per component (plus extras)
};

// delta = 2^-k, k = 2..12.
std::vector<double> default_delta_grid();

inline constexpr double kSlopeThreshold = 2.8;

// theta_eps = -(1/(n-1)) (1/eps) (eps - eps0) g(grad f, v). PreconditionError
// for eps = 0 or N = n (eps0 infinite) with g != 0.
double theta_eps(const DimensionParams& params, double gradf_v);

// F(theta) with alpha = (1-eps)/(n-1).
double F_theta(const DimensionParams& params, double theta, double gradf_v);

// Compares exact values with the expansion through delta^2. PreconditionError
// for eps = 0 on theta-dependent terms, CutLocusError if gamma(+-delta) is not
// cut-clear.
SeriesCheck check_series(const ModelSpace& space, const WeightFunction& weight, const DimensionParams& params,
                         double kappa, const Point& x, const Tangent& v, SeriesTerm term,
                         const std::vector<double>& grid = default_delta_grid());

// Second-order coefficients of the app6 quantity obtained by multiplying
// the app2-app4 series and taking the 1/2-mean, next to the displayed ones.
struct ProductRoute {
  Series2 route;
  Series2 displayed;
  double difference_at = 0.0;  // |route - displayed| at the probe delta
};
ProductRoute app6_product_route(const ModelSpace& space, const WeightFunction& weight, const DimensionParams& params,
                                double kappa, const Point& x, const Tangent& v, double probe = 1e-3);

// Both sides of F(theta) + (c+1)/(N-n) g^2 = (n/eps0)(eps theta + (eps-eps0) g/(n-1))^2
// on the grid. PreconditionError for N = n.
CheckReport check_F_identity(const DimensionParams& params, double gradf_v, const std::vector<double>& thetas);

// |d_t(x,y) / (t d(x,y)) - 1| <= |a| A e^{|a| A r} d(x,y) on y = gamma_v(r 2^-j), j = 0..halvings.
CheckReport check_limit_bound(const ModelSpace& space, const WeightFunction& weight, const DimensionParams& params,
                              double t, const Point& x, const Tangent& v, double r, int halvings = 10,
                              std::uint64_t seed = 0);

// Columns delta,exact,series,remainder.
void write_series_csv(std::ostream& os, const SeriesComponent& component);

}  // namespace cdcheck

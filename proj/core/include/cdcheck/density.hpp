#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "cdcheck/model_space.hpp"
#include "cdcheck/params.hpp"
#include "cdcheck/report.hpp"
#include "cdcheck/weight.hpp"

namespace cdcheck {

enum class AxisKind { kSlab, kZonal };

const char* to_string(AxisKind kind);

// One transverse sample: coordinates orthogonal to the axis and its share of
// the transverse probability.
struct TransverseNode {
  Eigen::VectorXd offset;
  double weight = 1.0;
};

// Reference measure of a quasi-1D configuration pushed to its axis.
//
//   slab   R^n with f(x) = f_1(x_1) + f_perp(x_perp); the transverse factor is
//          the unit cube [0,1]^{n-1}. Axis coordinate s = x_1.
//   zonal  sphere of radius R with f depending on the colatitude only.
//          Axis coordinate s = R * colatitude in [0, pi R].
//
// `density(s)` is the axis weight w(s): m restricted to functions of s is
// w(s) ds.
class AxisMeasure {
 public:
  static std::shared_ptr<const AxisMeasure> make(const ModelSpace& space, const WeightFunction& weight);

  AxisKind kind() const { return kind_; }
  const ModelSpace& space() const { return space_; }
  const WeightFunction& weight() const { return weight_; }
  double axis_lo() const;
  double axis_hi() const;
  double density(double s) const;
  // Total transverse mass folded into density().
  double transverse_mass() const { return transverse_mass_; }
  const std::vector<TransverseNode>& nodes() const { return nodes_; }

  Point point(double s, const TransverseNode& node) const;
  // Segment from axis coordinate s to s2 at fixed transverse position.
  GeodesicSegment segment(double s, double s2, const TransverseNode& node) const;

 private:
  AxisMeasure(AxisKind kind, ModelSpace space, WeightFunction weight)
      : kind_(kind), space_(std::move(space)), weight_(std::move(weight)) {}

  AxisKind kind_;
  ModelSpace space_;
  WeightFunction weight_;
  double transverse_mass_ = 1.0;
  double log_sphere_area_ = 0.0;  // log |S^{n-1}| for zonal measures
  std::vector<TransverseNode> nodes_;
};

// Density rho with respect to m on a uniform axis grid over [lo, hi]; zero
// outside. Grids carry 2^k + 1 points so that composite Simpson applies.
class DensityField {
 public:
  DensityField(std::shared_ptr<const AxisMeasure> measure, double lo, double hi, std::vector<double> rho);

  // Samples fn on 2^k + 1 points and rescales to unit mass.
  static DensityField from_function(std::shared_ptr<const AxisMeasure> measure, double lo, double hi,
                                    const std::function<double(double)>& fn, int log2_cells = 12);
  // Constant density normalizing m on the full axis (requires finite mass).
  static DensityField uniform(std::shared_ptr<const AxisMeasure> measure, int log2_cells = 12);

  const AxisMeasure& measure() const { return *measure_; }
  const std::shared_ptr<const AxisMeasure>& measure_ptr() const { return measure_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return rho_.size(); }
  double step() const { return (hi_ - lo_) / static_cast<double>(rho_.size() - 1); }
  double node(std::size_t i) const { return lo_ + step() * static_cast<double>(i); }
  const std::vector<double>& values() const { return rho_; }
  double operator[](std::size_t i) const { return rho_[i]; }

  // Integral of rho against m.
  double mass() const;
  double sup() const;
  DensityField normalized() const;
  // Cubic interpolation of rho * w, and of rho itself.
  double mass_density(double s) const;
  double value(double s) const;

  void write_csv(std::ostream& os) const;
  static DensityField read_csv(std::istream& is, std::shared_ptr<const AxisMeasure> measure);

 private:
  std::shared_ptr<const AxisMeasure> measure_;
  double lo_, hi_;
  std::vector<double> rho_;
};

// Simpson rule over a uniform grid of odd length.
double simpson(const std::vector<double>& values, double step);

// Monotone rearrangement between two fields on the same axis measure.
class MonotoneTransport {
 public:
  MonotoneTransport(const DensityField& rho0, const DensityField& rho1);

  const DensityField& source() const { return rho0_; }
  const DensityField& target() const { return rho1_; }

  // Values at the source grid nodes.
  const std::vector<double>& map_table() const { return T_; }
  const std::vector<double>& slope_table() const { return dT_; }

  double map(double s) const;
  double slope(double s) const;
  double displacement(double t, double s) const { return (1.0 - t) * s + t * map(s); }
  // Weighted Jacobian J_t(s) = w(F_t s) F_t'(s) / w(s) at source node i.
  double jacobian_at(double t, std::size_t i) const;
  // rho_t on the grid spanning [F_t(lo), F_t(hi)].
  DensityField interpolate(double t) const;
  // W_2 along the axis coupling.
  double w2() const;

 private:
  double source_cdf(double s) const;
  double target_quantile(double mass) const;

  DensityField rho0_, rho1_;
  std::vector<double> C0_, C1_;  // cumulative masses at nodes
  std::vector<double> T_, dT_;
};

// Integrand U of an entropy functional U_m(mu) = int U(rho) dm.
struct EntropyFunctional {
  std::string id;
  std::function<double(double)> U;
  bool renyi = false;

  // H(r) = c^{-1}(c+1) r (1 - r^{-c/(c+1)}).
  static EntropyFunctional renyi_entropy(const DimensionParams& params);
  // r log r.
  static EntropyFunctional boltzmann();
  static EntropyFunctional custom(std::string id, std::function<double(double)> U);
  // "renyi" or "boltzmann".
  static EntropyFunctional parse(const std::string& id, const DimensionParams& params);
};

struct EntropyValue {
  std::string id;
  double value = 0.0;
};

// Whether the reference measure makes U_m finite for every pair of
// absolutely continuous measures with finite second moment; closed form
// per model and weight preset.
bool moment_condition_holds(const AxisMeasure& measure, const DimensionParams& params);

// int U(rho) dm by Simpson. Throws IntegrabilityError for non-Renyi
// functionals when moment_condition_holds is false.
EntropyValue entropy_functional(const DensityField& rho, const DimensionParams& params,
                                const EntropyFunctional& U);

// U_m(mu_t) for the displacement interpolation, by pushing forward mu_0.
double interpolated_entropy(const MonotoneTransport& map, double t, const EntropyFunctional& U);

// int |d rho^{1/(c+1)}|^2 / rho dm by five-point differences; +inf when the
// integrand blows up where rho vanishes.
double fisher_information(const DensityField& rho, const DimensionParams& params);

// Discrete convexity of U and of r^{(c+1)/c} U(r^{-(c+1)/c}) on a log grid of
// [1e-6, 1e6], plus U(0) = 0.
CheckReport dc_membership(const std::function<double(double)>& U, const DimensionParams& params,
                          std::size_t points = 2001);

}  // namespace cdcheck

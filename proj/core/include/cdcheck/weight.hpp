#pragma once

#include <functional>
#include <memory>
#include <string>

#include "cdcheck/model_space.hpp"

namespace cdcheck {

enum class WeightMode { kAnalytic, kFiniteDifference };

// Smooth potential f of the reference measure e^{-f} vol. Presets are written
// in model coordinates:
//
//   zero, constant(f0)
//   linear(a)     a * x_1 (flat, hyperbolic); a * colatitude (sphere)
//   quadratic(a)  a |x|^2 / 2 (flat, hyperbolic); a * colatitude^2 / 2 (sphere)
//   cosine(a)     a * cos(x_1) (flat, hyperbolic); a * cos(colatitude) (sphere)
//
// The sphere colatitude is measured from the last embedding axis.
class WeightFunction {
 public:
  // Ambient coordinate function; derivatives are optional.
  using Scalar = std::function<double(const Eigen::VectorXd&)>;
  using Vector = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using Matrix = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  static WeightFunction zero();
  static WeightFunction constant(double f0);
  static WeightFunction linear(double a);
  static WeightFunction quadratic(double a);
  static WeightFunction cosine(double a);
  // Custom weights are differentiated numerically.
  static WeightFunction custom(std::string name, Scalar f);
  // Accepts "zero", "constant(0.3)", "linear(-1)", ...
  static WeightFunction parse(const std::string& text);

  const std::string& name() const { return name_; }
  const std::string& preset() const { return preset_; }
  double parameter() const { return parameter_; }
  WeightMode mode() const { return mode_; }
  bool is_constant() const { return constant_; }
  // Same function, derivatives forced through finite differences.
  WeightFunction finite_difference() const;

  double value(const ModelSpace& space, const Point& x) const;
  // Riemannian gradient as a tangent vector at x.
  Tangent grad(const ModelSpace& space, const Point& x) const;
  // Riemannian Hessian nabla^2 f(v, w).
  double hess(const ModelSpace& space, const Point& x, const Tangent& v, const Tangent& w) const;
  // g(grad f, v).
  double slope(const ModelSpace& space, const Point& x, const Tangent& v) const;

 private:
  WeightFunction() = default;

  double geodesic_second(const ModelSpace& space, const Point& x, const Tangent& u, double h) const;

  std::string name_;
  std::string preset_;
  double parameter_ = 0.0;
  WeightMode mode_ = WeightMode::kAnalytic;
  bool constant_ = false;
  // Per-space coordinate formulas. Index 0 flat/hyperbolic, 1 sphere.
  Scalar f_[2];
  Vector df_[2];
  Matrix d2f_[2];
};

}  // namespace cdcheck

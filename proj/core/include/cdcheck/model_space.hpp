#pragma once

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cdcheck {

using Point = Eigen::VectorXd;
using Tangent = Eigen::VectorXd;

enum class SpaceKind { kEuclidean, kSphere, kHyperbolic };

const char* to_string(SpaceKind kind);

// Minimal geodesic from start to end. `direction` is the unit initial
// velocity; it is arbitrary (and `degenerate` is set) when start == end.
struct GeodesicSegment {
  Point start;
  Point end;
  Tangent direction;
  double length = 0.0;
  bool cut_clear = true;
  bool degenerate = false;
};

// Axis-aligned box in model coordinates. Empty bounds mean "whole space"
// (sphere) or the model's default box.
struct Region {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  bool empty() const { return lo.size() == 0; }
};

// Constant-curvature model manifold.
//
//   euclidean(d)          points in R^d, sec = 0
//   sphere(d, radius)     points stored as unit vectors of R^{d+1}; the
//                         geometric point is radius * u. Tangent vectors are
//                         ambient vectors orthogonal to u, measured with the
//                         Euclidean norm. sec = 1 / radius^2.
//   hyperbolic(d, scale)  upper half-space coordinates (x_1..x_{d-1}, y > 0)
//                         with metric scale^2 |dz|^2 / y^2. Tangent vectors
//                         are coordinate velocities. sec = -1 / scale^2.
class ModelSpace {
 public:
  static ModelSpace euclidean(int dim);
  static ModelSpace sphere(int dim, double radius = 1.0);
  static ModelSpace hyperbolic(int dim, double scale = 1.0);

  SpaceKind kind() const { return kind_; }
  int dim() const { return dim_; }
  // Radius for spheres, curvature scale for hyperbolic space, 1 otherwise.
  double scale() const { return scale_; }
  double sectional() const;
  int ambient_dim() const { return kind_ == SpaceKind::kSphere ? dim_ + 1 : dim_; }
  std::string describe() const;

  bool contains(const Point& x, double tol = 1e-12) const;
  // Projects ambient coordinates onto the model (normalizes sphere points).
  Point canonical(const Point& x) const;

  double inner(const Point& x, const Tangent& v, const Tangent& w) const;
  double norm(const Point& x, const Tangent& v) const;
  Tangent normalize(const Point& x, const Tangent& v) const;
  // Removes the normal component (sphere); identity elsewhere.
  Tangent project(const Point& x, const Tangent& v) const;

  // gamma_v(t) for unit v. The parameter t is arclength.
  Point geodesic_point(const Point& x, const Tangent& v, double t) const;
  Tangent geodesic_velocity(const Point& x, const Tangent& v, double t) const;
  // exp_x(w) for arbitrary w.
  Point exp(const Point& x, const Tangent& w) const;
  // Parallel transport of w along t -> gamma_v(t) from 0 to t.
  Tangent transport(const Point& x, const Tangent& v, double t, const Tangent& w) const;

  double distance(const Point& x, const Point& y) const;
  // Throws CutLocusError for (near-)antipodal pairs on the sphere.
  GeodesicSegment log_map(const Point& x, const Point& y) const;
  // tau(v): pi * radius on spheres, +inf otherwise.
  double cut_time(const Point& x, const Tangent& v) const;

  // Orthonormal basis of T_x as columns; the last column is v when given.
  Eigen::MatrixXd orthonormal_frame(const Point& x) const;
  Eigen::MatrixXd orthonormal_frame(const Point& x, const Tangent& v) const;

  // Ric_g(v) = (n - 1) sec |v|^2.
  double ricci(const Point& x, const Tangent& v) const;

  Point random_point(std::mt19937_64& rng, const Region& region = {}) const;
  Tangent random_unit_tangent(const Point& x, std::mt19937_64& rng) const;
  Region default_region() const;

  // Euclidean margin kept from the sphere cut locus.
  static constexpr double kCutMargin = 1e-6;

 private:
  ModelSpace(SpaceKind kind, int dim, double scale) : kind_(kind), dim_(dim), scale_(scale) {}

  SpaceKind kind_;
  int dim_;
  double scale_;
};

}  // namespace cdcheck

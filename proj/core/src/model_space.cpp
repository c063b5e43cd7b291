#include "cdcheck/model_space.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cdcheck/errors.hpp"

namespace cdcheck {

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::kEuclidean: return "euclidean";
    case SpaceKind::kSphere: return "sphere";
    case SpaceKind::kHyperbolic: return "hyperbolic";
  }
  return "unknown";
}

namespace {

// Hyperboloid model of unit curvature in R^{d,1}; coordinate 0 is timelike.
double lorentz(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return -a(0) * b(0) + a.tail(a.size() - 1).dot(b.tail(b.size() - 1));
}

Eigen::VectorXd to_hyperboloid(const Point& z) {
  const int d = static_cast<int>(z.size());
  const double y = z(d - 1);
  const double A = z.squaredNorm();
  Eigen::VectorXd X(d + 1);
  X(0) = (A + 1.0) / (2.0 * y);
  for (int k = 0; k < d - 1; ++k) X(k + 1) = z(k) / y;
  X(d) = (A - 1.0) / (2.0 * y);
  return X;
}

Eigen::VectorXd push_tangent(const Point& z, const Tangent& v) {
  const int d = static_cast<int>(z.size());
  const double y = z(d - 1);
  const double vy = v(d - 1);
  const Eigen::VectorXd x = z.head(d - 1);
  const Eigen::VectorXd vx = v.head(d - 1);
  const double xx = x.squaredNorm();
  const double xv = x.dot(vx);
  Eigen::VectorXd xi(d + 1);
  xi(0) = xv / y + (y * y - xx - 1.0) / (2.0 * y * y) * vy;
  for (int k = 0; k < d - 1; ++k) xi(k + 1) = vx(k) / y - x(k) * vy / (y * y);
  xi(d) = xv / y + (y * y - xx + 1.0) / (2.0 * y * y) * vy;
  return xi;
}

Point from_hyperboloid(const Eigen::VectorXd& X) {
  const int d = static_cast<int>(X.size()) - 1;
  const double y = 1.0 / (X(0) - X(d));
  Point z(d);
  for (int k = 0; k < d - 1; ++k) z(k) = X(k + 1) * y;
  z(d - 1) = y;
  return z;
}

Tangent pull_tangent(const Eigen::VectorXd& X, const Eigen::VectorXd& xi) {
  const int d = static_cast<int>(X.size()) - 1;
  const double y = 1.0 / (X(0) - X(d));
  const double vy = -y * y * (xi(0) - xi(d));
  Tangent v(d);
  for (int k = 0; k < d - 1; ++k) v(k) = xi(k + 1) * y + X(k + 1) * vy;
  v(d - 1) = vy;
  return v;
}

// sinh(r)/r without cancellation near 0.
double sinhc(double r) {
  if (std::abs(r) < 1e-4) return 1.0 + r * r / 6.0;
  return std::sinh(r) / r;
}

double sinc(double r) {
  if (std::abs(r) < 1e-4) return 1.0 - r * r / 6.0;
  return std::sin(r) / r;
}

}  // namespace

ModelSpace ModelSpace::euclidean(int dim) {
  if (dim < 1) throw ConfigError("euclidean dimension must be >= 1");
  return ModelSpace(SpaceKind::kEuclidean, dim, 1.0);
}

ModelSpace ModelSpace::sphere(int dim, double radius) {
  if (dim < 1) throw ConfigError("sphere dimension must be >= 1");
  if (!(radius > 0)) throw ConfigError("sphere radius must be positive");
  return ModelSpace(SpaceKind::kSphere, dim, radius);
}

ModelSpace ModelSpace::hyperbolic(int dim, double scale) {
  if (dim < 2) throw ConfigError("hyperbolic upper half-space needs dimension >= 2");
  if (!(scale > 0)) throw ConfigError("hyperbolic scale must be positive");
  return ModelSpace(SpaceKind::kHyperbolic, dim, scale);
}

double ModelSpace::sectional() const {
  switch (kind_) {
    case SpaceKind::kEuclidean: return 0.0;
    case SpaceKind::kSphere: return 1.0 / (scale_ * scale_);
    case SpaceKind::kHyperbolic: return -1.0 / (scale_ * scale_);
  }
  return 0.0;
}

std::string ModelSpace::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(" << dim_;
  if (kind_ != SpaceKind::kEuclidean) os << ", " << scale_;
  os << ")";
  return os.str();
}

bool ModelSpace::contains(const Point& x, double tol) const {
  if (x.size() != ambient_dim() || !x.allFinite()) return false;
  switch (kind_) {
    case SpaceKind::kEuclidean: return true;
    case SpaceKind::kSphere: return std::abs(x.norm() - 1.0) <= tol;
    case SpaceKind::kHyperbolic: return x(dim_ - 1) > 0;
  }
  return false;
}

Point ModelSpace::canonical(const Point& x) const {
  if (kind_ == SpaceKind::kSphere) return x / x.norm();
  return x;
}

double ModelSpace::inner(const Point& x, const Tangent& v, const Tangent& w) const {
  if (kind_ == SpaceKind::kHyperbolic) {
    const double y = x(dim_ - 1);
    return scale_ * scale_ * v.dot(w) / (y * y);
  }
  return v.dot(w);
}

double ModelSpace::norm(const Point& x, const Tangent& v) const {
  return std::sqrt(inner(x, v, v));
}

Tangent ModelSpace::normalize(const Point& x, const Tangent& v) const {
  return v / norm(x, v);
}

Tangent ModelSpace::project(const Point& x, const Tangent& v) const {
  if (kind_ == SpaceKind::kSphere) return v - x.dot(v) * x;
  return v;
}

Point ModelSpace::exp(const Point& x, const Tangent& w) const {
  switch (kind_) {
    case SpaceKind::kEuclidean: return x + w;
    case SpaceKind::kSphere: {
      const double r = w.norm() / scale_;
      Point p = std::cos(r) * x + sinc(r) / scale_ * w;
      return p / p.norm();
    }
    case SpaceKind::kHyperbolic: {
      const Eigen::VectorXd P = to_hyperboloid(x);
      const Eigen::VectorXd xi = push_tangent(x, w);
      const double r = std::sqrt(std::max(0.0, lorentz(xi, xi)));
      return from_hyperboloid(std::cosh(r) * P + sinhc(r) * xi);
    }
  }
  return x;
}

Point ModelSpace::geodesic_point(const Point& x, const Tangent& v, double t) const {
  return exp(x, t * v);
}

Tangent ModelSpace::geodesic_velocity(const Point& x, const Tangent& v, double t) const {
  switch (kind_) {
    case SpaceKind::kEuclidean: return v;
    case SpaceKind::kSphere: {
      const double r = t / scale_;
      return -std::sin(r) / scale_ * x + std::cos(r) * v;
    }
    case SpaceKind::kHyperbolic: {
      const Eigen::VectorXd P = to_hyperboloid(x);
      const Eigen::VectorXd xi = push_tangent(x, v);
      const double speed = std::sqrt(lorentz(xi, xi));  // = 1 / scale for unit v
      const double r = t * speed;
      const Eigen::VectorXd Q = std::cosh(r) * P + std::sinh(r) * xi / speed;
      const Eigen::VectorXd dQ = speed * (std::sinh(r) * P + std::cosh(r) * xi / speed);
      return pull_tangent(Q, dQ);
    }
  }
  return v;
}

Tangent ModelSpace::transport(const Point& x, const Tangent& v, double t, const Tangent& w) const {
  switch (kind_) {
    case SpaceKind::kEuclidean: return w;
    case SpaceKind::kSphere: {
      const double r = t / scale_;
      const double along = w.dot(v);
      const Tangent rest = w - along * v;
      return rest + along * (-std::sin(r) * x + std::cos(r) * v);
    }
    case SpaceKind::kHyperbolic: {
      const Eigen::VectorXd P = to_hyperboloid(x);
      const Eigen::VectorXd xi = push_tangent(x, v);
      const double speed = std::sqrt(lorentz(xi, xi));
      const Eigen::VectorXd e = xi / speed;
      const Eigen::VectorXd W = push_tangent(x, w);
      const double along = lorentz(W, e);
      const double r = t * speed;
      const Eigen::VectorXd Q = std::cosh(r) * P + std::sinh(r) * e;
      const Eigen::VectorXd moved = (W - along * e) + along * (std::sinh(r) * P + std::cosh(r) * e);
      return pull_tangent(Q, moved);
    }
  }
  return w;
}

double ModelSpace::distance(const Point& x, const Point& y) const {
  switch (kind_) {
    case SpaceKind::kEuclidean: return (y - x).norm();
    case SpaceKind::kSphere: {
      const double cosr = x.dot(y);
      const double sinr = (y - cosr * x).norm();
      return scale_ * std::atan2(sinr, cosr);
    }
    case SpaceKind::kHyperbolic: {
      const double y1 = x(dim_ - 1), y2 = y(dim_ - 1);
      return scale_ * 2.0 * std::asinh((y - x).norm() / (2.0 * std::sqrt(y1 * y2)));
    }
  }
  return 0.0;
}

GeodesicSegment ModelSpace::log_map(const Point& x, const Point& y) const {
  GeodesicSegment seg;
  seg.start = x;
  seg.end = y;
  switch (kind_) {
    case SpaceKind::kEuclidean: {
      const Tangent w = y - x;
      seg.length = w.norm();
      if (seg.length == 0.0) {
        seg.degenerate = true;
        seg.direction = Tangent::Unit(dim_, 0);
      } else {
        seg.direction = w / seg.length;
      }
      return seg;
    }
    case SpaceKind::kSphere: {
      const double cosr = x.dot(y);
      const Tangent w = y - cosr * x;
      const double sinr = w.norm();
      const double r = std::atan2(sinr, cosr);
      seg.length = scale_ * r;
      if (seg.length > M_PI * scale_ - kCutMargin) {
        throw CutLocusError("points are (nearly) antipodal; minimal geodesic is not unique");
      }
      if (sinr == 0.0) {
        seg.degenerate = true;
        seg.direction = orthonormal_frame(x).col(0);
      } else {
        seg.direction = w / sinr;
      }
      return seg;
    }
    case SpaceKind::kHyperbolic: {
      const Eigen::VectorXd P = to_hyperboloid(x);
      const Eigen::VectorXd Q = to_hyperboloid(y);
      const Eigen::VectorXd W = Q + lorentz(P, Q) * P;
      const double sinhr = std::sqrt(std::max(0.0, lorentz(W, W)));
      const double r = std::asinh(sinhr);
      seg.length = scale_ * r;
      if (sinhr == 0.0) {
        seg.degenerate = true;
        seg.direction = Tangent::Unit(dim_, dim_ - 1) * x(dim_ - 1) / scale_;
      } else {
        // Lorentz-unit direction rescaled to Riemannian unit length.
        seg.direction = pull_tangent(P, W / sinhr) / scale_;
      }
      return seg;
    }
  }
  return seg;
}

double ModelSpace::cut_time(const Point&, const Tangent&) const {
  if (kind_ == SpaceKind::kSphere) return M_PI * scale_;
  return std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd ModelSpace::orthonormal_frame(const Point& x) const {
  switch (kind_) {
    case SpaceKind::kEuclidean: return Eigen::MatrixXd::Identity(dim_, dim_);
    case SpaceKind::kSphere: {
      Eigen::MatrixXd M(dim_ + 1, dim_ + 1);
      M.col(0) = x;
      M.rightCols(dim_) = Eigen::MatrixXd::Identity(dim_ + 1, dim_ + 1).leftCols(dim_);
      // Pick the identity columns least aligned with x for conditioning.
      int skip = 0;
      x.cwiseAbs().maxCoeff(&skip);
      int col = 1;
      for (int k = 0; k <= dim_; ++k) {
        if (k == skip) continue;
        M.col(col++) = Eigen::VectorXd::Unit(dim_ + 1, k);
      }
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
      Eigen::MatrixXd Q = qr.householderQ();
      return Q.rightCols(dim_);
    }
    case SpaceKind::kHyperbolic:
      return Eigen::MatrixXd::Identity(dim_, dim_) * (x(dim_ - 1) / scale_);
  }
  return {};
}

Eigen::MatrixXd ModelSpace::orthonormal_frame(const Point& x, const Tangent& v) const {
  const Eigen::MatrixXd base = orthonormal_frame(x);
  Eigen::VectorXd coords(dim_);
  for (int i = 0; i < dim_; ++i) coords(i) = inner(x, v, base.col(i));
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(dim_, dim_);
  M.col(0) = coords.normalized();
  int skip = 0;
  coords.cwiseAbs().maxCoeff(&skip);
  int col = 1;
  for (int k = 0; k < dim_ && col < dim_; ++k) {
    if (k == skip) continue;
    M.col(col++) = Eigen::VectorXd::Unit(dim_, k);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ();
  if (Q.col(0).dot(coords) < 0) Q.col(0) *= -1.0;
  Eigen::MatrixXd ordered(dim_, dim_);
  ordered.leftCols(dim_ - 1) = Q.rightCols(dim_ - 1);
  ordered.col(dim_ - 1) = Q.col(0);
  return base * ordered;
}

double ModelSpace::ricci(const Point& x, const Tangent& v) const {
  return (dim_ - 1) * sectional() * inner(x, v, v);
}

Region ModelSpace::default_region() const {
  Region r;
  switch (kind_) {
    case SpaceKind::kEuclidean:
      r.lo = Eigen::VectorXd::Constant(dim_, -1.0);
      r.hi = Eigen::VectorXd::Constant(dim_, 1.0);
      break;
    case SpaceKind::kSphere:
      break;
    case SpaceKind::kHyperbolic:
      r.lo = Eigen::VectorXd::Constant(dim_, -1.0);
      r.hi = Eigen::VectorXd::Constant(dim_, 1.0);
      r.lo(dim_ - 1) = 0.5;
      r.hi(dim_ - 1) = 2.0;
      break;
  }
  return r;
}

Point ModelSpace::random_point(std::mt19937_64& rng, const Region& region) const {
  if (kind_ == SpaceKind::kSphere) {
    std::normal_distribution<double> g;
    Point p(dim_ + 1);
    do {
      for (int i = 0; i <= dim_; ++i) p(i) = g(rng);
    } while (p.norm() < 1e-8);
    return p / p.norm();
  }
  const Region box = region.empty() ? default_region() : region;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point p(dim_);
  for (int i = 0; i < dim_; ++i) p(i) = box.lo(i) + (box.hi(i) - box.lo(i)) * u(rng);
  return p;
}

Tangent ModelSpace::random_unit_tangent(const Point& x, std::mt19937_64& rng) const {
  const Eigen::MatrixXd frame = orthonormal_frame(x);
  std::normal_distribution<double> g;
  Eigen::VectorXd c(dim_);
  do {
    for (int i = 0; i < dim_; ++i) c(i) = g(rng);
  } while (c.norm() < 1e-8);
  return frame * c.normalized();
}

}  // namespace cdcheck

#include "cdcheck/weight.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "cdcheck/errors.hpp"

namespace cdcheck {

namespace {

constexpr int kFlat = 0;
constexpr int kSphere = 1;

int slot(const ModelSpace& space) { return space.kind() == SpaceKind::kSphere ? kSphere : kFlat; }

Eigen::VectorXd unit(int size, int i) { return Eigen::VectorXd::Unit(size, i); }

// Colatitude z -> acos(z) with first and second derivatives.
struct Colat {
  double theta, d1, d2;
};

Colat colatitude(double z) {
  z = std::clamp(z, -1.0, 1.0);
  const double s2 = std::max(1.0 - z * z, 1e-300);
  return {std::acos(z), -1.0 / std::sqrt(s2), -z / (s2 * std::sqrt(s2))};
}

}  // namespace

WeightFunction WeightFunction::zero() {
  WeightFunction w = constant(0.0);
  w.name_ = "zero";
  w.preset_ = "zero";
  return w;
}

WeightFunction WeightFunction::constant(double f0) {
  WeightFunction w;
  w.name_ = "constant(" + std::to_string(f0) + ")";
  w.preset_ = "constant";
  w.parameter_ = f0;
  w.constant_ = true;
  for (int k = 0; k < 2; ++k) {
    w.f_[k] = [f0](const Eigen::VectorXd&) { return f0; };
    w.df_[k] = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()).eval(); };
    w.d2f_[k] = [](const Eigen::VectorXd& x) { return Eigen::MatrixXd::Zero(x.size(), x.size()).eval(); };
  }
  return w;
}

WeightFunction WeightFunction::linear(double a) {
  WeightFunction w;
  w.name_ = "linear(" + std::to_string(a) + ")";
  w.preset_ = "linear";
  w.parameter_ = a;
  w.constant_ = a == 0.0;
  w.f_[kFlat] = [a](const Eigen::VectorXd& x) { return a * x(0); };
  w.df_[kFlat] = [a](const Eigen::VectorXd& x) { return (a * unit(x.size(), 0)).eval(); };
  w.d2f_[kFlat] = [](const Eigen::VectorXd& x) { return Eigen::MatrixXd::Zero(x.size(), x.size()).eval(); };
  w.f_[kSphere] = [a](const Eigen::VectorXd& u) { return a * colatitude(u(u.size() - 1)).theta; };
  w.df_[kSphere] = [a](const Eigen::VectorXd& u) {
    const int d = static_cast<int>(u.size()) - 1;
    return (a * colatitude(u(d)).d1 * unit(d + 1, d)).eval();
  };
  w.d2f_[kSphere] = [a](const Eigen::VectorXd& u) {
    const int d = static_cast<int>(u.size()) - 1;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d + 1, d + 1);
    H(d, d) = a * colatitude(u(d)).d2;
    return H;
  };
  return w;
}

WeightFunction WeightFunction::quadratic(double a) {
  WeightFunction w;
  w.name_ = "quadratic(" + std::to_string(a) + ")";
  w.preset_ = "quadratic";
  w.parameter_ = a;
  w.constant_ = a == 0.0;
  w.f_[kFlat] = [a](const Eigen::VectorXd& x) { return 0.5 * a * x.squaredNorm(); };
  w.df_[kFlat] = [a](const Eigen::VectorXd& x) { return (a * x).eval(); };
  w.d2f_[kFlat] = [a](const Eigen::VectorXd& x) {
    return (a * Eigen::MatrixXd::Identity(x.size(), x.size())).eval();
  };
  w.f_[kSphere] = [a](const Eigen::VectorXd& u) {
    const double th = colatitude(u(u.size() - 1)).theta;
    return 0.5 * a * th * th;
  };
  w.df_[kSphere] = [a](const Eigen::VectorXd& u) {
    const int d = static_cast<int>(u.size()) - 1;
    const Colat c = colatitude(u(d));
    return (a * c.theta * c.d1 * unit(d + 1, d)).eval();
  };
  w.d2f_[kSphere] = [a](const Eigen::VectorXd& u) {
    const int d = static_cast<int>(u.size()) - 1;
    const Colat c = colatitude(u(d));
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(d + 1, d + 1);
    H(d, d) = a * (c.d1 * c.d1 + c.theta * c.d2);
    return H;
  };
  return w;
}

WeightFunction WeightFunction::cosine(double a) {
  WeightFunction w;
  w.name_ = "cosine(" + std::to_string(a) + ")";
  w.preset_ = "cosine";
  w.parameter_ = a;
  w.constant_ = a == 0.0;
  w.f_[kFlat] = [a](const Eigen::VectorXd& x) { return a * std::cos(x(0)); };
  w.df_[kFlat] = [a](const Eigen::VectorXd& x) { return (-a * std::sin(x(0)) * unit(x.size(), 0)).eval(); };
  w.d2f_[kFlat] = [a](const Eigen::VectorXd& x) {
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(x.size(), x.size());
    H(0, 0) = -a * std::cos(x(0));
    return H;
  };
  w.f_[kSphere] = [a](const Eigen::VectorXd& u) { return a * u(u.size() - 1); };
  w.df_[kSphere] = [a](const Eigen::VectorXd& u) { return (a * unit(u.size(), u.size() - 1)).eval(); };
  w.d2f_[kSphere] = [](const Eigen::VectorXd& u) { return Eigen::MatrixXd::Zero(u.size(), u.size()).eval(); };
  return w;
}

WeightFunction WeightFunction::custom(std::string name, Scalar f) {
  WeightFunction w;
  w.name_ = std::move(name);
  w.preset_ = "custom";
  w.mode_ = WeightMode::kFiniteDifference;
  w.f_[kFlat] = f;
  w.f_[kSphere] = f;
  return w;
}

WeightFunction WeightFunction::parse(const std::string& text) {
  static const std::regex re(R"(^\s*([a-z]+)\s*(?:\(\s*([-+0-9.eE]+)\s*\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw ConfigError("unrecognized weight preset '" + text + "'");
  const std::string name = m[1];
  const bool has_arg = m[2].matched;
  double arg = 0.0;
  if (has_arg) {
    try {
      std::size_t used = 0;
      arg = std::stod(m[2].str(), &used);
      if (used != m[2].str().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("bad numeric argument in weight preset '" + text + "'");
    }
  }
  if (name == "zero") {
    if (has_arg) throw ConfigError("weight preset 'zero' takes no argument");
    return zero();
  }
  if (!has_arg) throw ConfigError("weight preset '" + name + "' needs an argument, e.g. " + name + "(0.5)");
  if (name == "constant") return constant(arg);
  if (name == "linear") return linear(arg);
  if (name == "quadratic") return quadratic(arg);
  if (name == "cosine") return cosine(arg);
  throw ConfigError("unknown weight preset '" + name + "'");
}

WeightFunction WeightFunction::finite_difference() const {
  WeightFunction w = *this;
  w.mode_ = WeightMode::kFiniteDifference;
  return w;
}

double WeightFunction::value(const ModelSpace& space, const Point& x) const {
  return f_[slot(space)](x);
}

double WeightFunction::geodesic_second(const ModelSpace& space, const Point& x, const Tangent& u,
                                       double h) const {
  const double fp = value(space, space.exp(x, h * u));
  const double fm = value(space, space.exp(x, -h * u));
  return (fp - 2.0 * value(space, x) + fm) / (h * h);
}

Tangent WeightFunction::grad(const ModelSpace& space, const Point& x) const {
  if (constant_) return Tangent::Zero(space.ambient_dim());
  if (mode_ == WeightMode::kFiniteDifference) {
    const double h = 1e-5 * (1.0 + x.norm());
    const Eigen::MatrixXd frame = space.orthonormal_frame(x);
    Tangent g = Tangent::Zero(space.ambient_dim());
    for (int i = 0; i < frame.cols(); ++i) {
      const Tangent e = frame.col(i);
      const double d = (value(space, space.exp(x, h * e)) - value(space, space.exp(x, -h * e))) / (2.0 * h);
      g += d * e;
    }
    return g;
  }
  const Eigen::VectorXd df = df_[slot(space)](x);
  switch (space.kind()) {
    case SpaceKind::kEuclidean: return df;
    case SpaceKind::kSphere: return (df - x.dot(df) * x) / space.scale();
    case SpaceKind::kHyperbolic: {
      const double y = x(space.dim() - 1);
      return df * (y * y) / (space.scale() * space.scale());
    }
  }
  return df;
}

double WeightFunction::slope(const ModelSpace& space, const Point& x, const Tangent& v) const {
  return space.inner(x, grad(space, x), v);
}

double WeightFunction::hess(const ModelSpace& space, const Point& x, const Tangent& v,
                            const Tangent& w) const {
  if (constant_) return 0.0;
  if (mode_ == WeightMode::kFiniteDifference) {
    const double h = 1e-4 * (1.0 + x.norm());
    return 0.25 * (geodesic_second(space, x, v + w, h) - geodesic_second(space, x, v - w, h));
  }
  const int k = slot(space);
  const Eigen::VectorXd df = df_[k](x);
  const Eigen::MatrixXd H = d2f_[k](x);
  const double raw = v.dot(H * w);
  switch (space.kind()) {
    case SpaceKind::kEuclidean: return raw;
    case SpaceKind::kSphere: {
      const double R = space.scale();
      return (raw - x.dot(df) * v.dot(w)) / (R * R);
    }
    case SpaceKind::kHyperbolic: {
      // Levi-Civita correction for the conformal metric scale^2 |dz|^2 / y^2.
      const int d = space.dim() - 1;
      const double y = x(d);
      return raw + (v.dot(df) * w(d) + w.dot(df) * v(d) - v.dot(w) * df(d)) / y;
    }
  }
  return raw;
}

}  // namespace cdcheck

#include "cdcheck/params.hpp"

#include <cmath>
#include <sstream>

#include "cdcheck/errors.hpp"

namespace cdcheck {

namespace {
constexpr double kSeriesThreshold = 1e-8;
}

std::string ExtendedReal::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_;
  return os.str();
}

double DimensionParams::inverse_gap() const {
  if (N.is_infinite()) return 0.0;
  return 1.0 / (N.value() - n);
}

DimensionParams validate_params(int n, ExtendedReal N, double eps) {
  if (n < 2) {
    throw DimensionError("manifold dimension n must be >= 2, got " + std::to_string(n));
  }
  if (!N.is_infinite() && !std::isfinite(N.value())) {
    throw DimensionError("N must be a real number or inf");
  }
  if (!std::isfinite(eps)) throw RangeError("eps must be finite");

  DimensionParams p;
  p.n = n;
  p.N = N;
  p.eps = eps;
  const double nm1 = n - 1.0;

  if (N.is_infinite()) {
    p.eps0 = 1.0;
    if (!(std::abs(eps) < 1.0)) {
      throw RangeError("eps must lie in ]-1, 1[ for N = inf, got " + std::to_string(eps));
    }
    p.c = (1.0 - eps * eps) / nm1;
    return p;
  }

  const double Nv = N.value();
  if (Nv > 1.0 && Nv < n) {
    throw DimensionError("N must lie in ]-inf, 1] or [n, inf], got N = " + N.to_string() +
                         " with n = " + std::to_string(n));
  }
  if (Nv == 1.0) {
    if (eps != 0.0) throw RangeError("eps must be 0 for N = 1");
    p.eps0 = 0.0;
    p.c = 1.0 / nm1;
    return p;
  }
  if (Nv == n) {
    p.eps0 = std::numeric_limits<double>::infinity();
    p.c = 1.0 / nm1;
    return p;
  }
  p.eps0 = (Nv - 1.0) / (Nv - n);
  if (!(eps * eps < p.eps0)) {
    throw RangeError("eps = " + std::to_string(eps) + " outside ]-sqrt(eps0), sqrt(eps0)[ with eps0 = " +
                     std::to_string(p.eps0));
  }
  p.c = (1.0 - eps * eps * (Nv - n) / (Nv - 1.0)) / nm1;
  return p;
}

double s_kappa(double kappa, double s) {
  if (std::abs(kappa) * s * s < kSeriesThreshold) {
    const double s2 = s * s;
    return s * (1.0 - kappa * s2 / 6.0 + kappa * kappa * s2 * s2 / 120.0);
  }
  if (kappa > 0) {
    const double r = std::sqrt(kappa);
    return std::sin(r * s) / r;
  }
  const double r = std::sqrt(-kappa);
  return std::sinh(r * s) / r;
}

double c_kappa(double kappa, double s) {
  if (std::abs(kappa) * s * s < kSeriesThreshold) {
    const double ks2 = kappa * s * s;
    return 1.0 - ks2 / 2.0 + ks2 * ks2 / 24.0;
  }
  if (kappa > 0) return std::cos(std::sqrt(kappa) * s);
  return std::cosh(std::sqrt(-kappa) * s);
}

double diam_kappa(double kappa) {
  if (kappa > 0) return M_PI / std::sqrt(kappa);
  return std::numeric_limits<double>::infinity();
}

}  // namespace cdcheck

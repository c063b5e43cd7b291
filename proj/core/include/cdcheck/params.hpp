#pragma once

#include <limits>
#include <string>

namespace cdcheck {

// Real number or +infinity. Used for the effective dimension N, where the
// infinite case is handled by closed-form limits rather than large numbers.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  constexpr ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit by design of the domain
  static constexpr ExtendedReal infinity() {
    ExtendedReal r;
    r.infinite_ = true;
    r.value_ = std::numeric_limits<double>::infinity();
    return r;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr double value() const { return value_; }
  std::string to_string() const;

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

 private:
  double value_ = 0.0;
  bool infinite_ = false;
};

// Validated (n, N, eps) with the derived constants eps0 and c.
struct DimensionParams {
  int n = 2;
  ExtendedReal N = 2.0;
  double eps = 0.0;
  // (N-1)/(N-n); 1 for N = inf; +inf for N = n, where eps is unrestricted.
  double eps0 = 0.0;
  double c = 1.0;

  // 2(1-eps)/(n-1): rate in the reweighting factor exp(-rate * f).
  double reparam_rate() const { return 2.0 * (1.0 - eps) / (n - 1); }
  // c / (c + 1), the exponent of the interpolation inequalities.
  double c_ratio() const { return c / (c + 1.0); }
  // 1/(N-n), with the limit 0 for N = inf. Undefined (inf) for N = n.
  double inverse_gap() const;
  bool is_n_equal() const { return !N.is_infinite() && N.value() == n; }
};

// Throws DimensionError for n < 2 or 1 < N < n, RangeError when eps leaves
// the open eps-range.
DimensionParams validate_params(int n, ExtendedReal N, double eps);

// Solution of psi'' + kappa psi = 0, psi(0) = 0, psi'(0) = 1.
double s_kappa(double kappa, double s);
// Derivative of s_kappa in s.
double c_kappa(double kappa, double s);
// pi / sqrt(kappa) for kappa > 0, +inf otherwise.
double diam_kappa(double kappa);

}  // namespace cdcheck

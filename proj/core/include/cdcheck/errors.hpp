#pragma once

#include <stdexcept>
#include <string>

namespace cdcheck {

// Base of every error raised by the library. The CLI maps all of these to
// exit code 2 (configuration or precondition failure).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define CDCHECK_DEFINE_ERROR(Name)                                 \
  class Name : public Error {                                      \
   public:                                                         \
    using Error::Error;                                            \
    const char* kind() const noexcept override { return #Name; }   \
  };

// eps outside the admissible range for (n, N).
CDCHECK_DEFINE_ERROR(RangeError)
// n < 2, or 1 < N < n.
CDCHECK_DEFINE_ERROR(DimensionError)
// Pair of points without a unique minimal geodesic.
CDCHECK_DEFINE_ERROR(CutLocusError)
// Inconsistent combination of space, weight and parameters.
CDCHECK_DEFINE_ERROR(ConfigError)
// det(dF_t) <= 0 somewhere on the transport ray.
CDCHECK_DEFINE_ERROR(SingularJacobian)
// Discrete problem beyond the exact-solver cap.
CDCHECK_DEFINE_ERROR(SizeError)
// Reference measure too heavy-tailed for the requested functional.
CDCHECK_DEFINE_ERROR(IntegrabilityError)
// Pointwise hypothesis of an interpolation inequality is violated.
CDCHECK_DEFINE_ERROR(HypothesisError)
// A named precondition of a functional inequality does not hold.
CDCHECK_DEFINE_ERROR(PreconditionError)
// Region shape not supported by the Brunn-Minkowski checker.
CDCHECK_DEFINE_ERROR(RegionError)

#undef CDCHECK_DEFINE_ERROR

}  // namespace cdcheck

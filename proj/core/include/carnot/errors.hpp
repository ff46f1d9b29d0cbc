#pragma once

#include <stdexcept>
#include <string>

namespace carnot {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input data fails structural validation (bad algebra spec, bad config,
/// inadmissible exponents). CLI exit code 1.
struct ValidationError : Error {
  using Error::Error;
};

struct MalformedSpec : ValidationError {
  using ValidationError::ValidationError;
};

/// Jacobi identity fails; message names the offending triple.
struct JacobiViolation : ValidationError {
  int i, j, k;
  JacobiViolation(int i_, int j_, int k_, const std::string& detail)
      : ValidationError("Jacobi identity violated on triple (e" + std::to_string(i_ + 1) +
                        ", e" + std::to_string(j_ + 1) + ", e" + std::to_string(k_ + 1) + "): " + detail),
        i(i_), j(j_), k(k_) {}
};

/// A structure constant lands outside the layer forced by the grading.
struct GradingViolation : ValidationError {
  int i, j, k;
  GradingViolation(int i_, int j_, int k_)
      : ValidationError("grading violated: c^" + std::to_string(k_ + 1) + "_{" + std::to_string(i_ + 1) +
                        "," + std::to_string(j_ + 1) + "} nonzero but layers do not add up"),
        i(i_), j(j_), k(k_) {}
};

/// Layer V_{i+1} is not spanned by [V_1, V_i].
struct GenerationFailure : ValidationError {
  int layer;
  GenerationFailure(int layer_, const std::string& detail)
      : ValidationError("generation failure at layer " + std::to_string(layer_) + ": " + detail),
        layer(layer_) {}
};

/// An exact symbolic identity that must hold fails. CLI exit code 2.
struct IdentityError : Error {
  using Error::Error;
};

struct NilpotencyNotReached : IdentityError {
  using IdentityError::IdentityError;
};

/// A named operator identity (projection, complex, duality) fails; the message
/// carries the first violated identity.
struct IdentityFailure : IdentityError {
  using IdentityError::IdentityError;
};

/// Numeric pipeline failure (quadrature, calibration, tolerance). CLI exit code 3.
struct NumericError : Error {
  using Error::Error;
};

struct CalibrationFailure : NumericError {
  using NumericError::NumericError;
};

/// Bad command line / malformed request. CLI exit code 4.
struct UsageError : Error {
  using Error::Error;
};

}  // namespace carnot

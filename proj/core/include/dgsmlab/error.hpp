#pragma once

#include <stdexcept>
#include <string>

namespace dgsmlab {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (probability outside (0,1),
// point outside a support, nonphysical model input).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A fixed-size resource was exceeded: direction-number table, quadrature
// dimension limit.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The measure does not satisfy the hypotheses of the Cheeger-constant search.
class UnsupportedMeasureError : public Error {
 public:
  using Error::Error;
};

// Output variance is zero, so normalized indices are undefined.
class DegenerateModelError : public Error {
 public:
  using Error::Error;
};

// The model cannot provide what was asked (e.g. an analytic gradient).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Mismatched matrix or vector shapes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Model evaluation failed. For external models `diagnostics` holds the
// captured standard error of the failing process.
class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& what, std::string diagnostics = {})
      : Error(what), diagnostics_(std::move(diagnostics)) {}

  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace dgsmlab

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opuc {

/// Raised when an input violates a documented precondition (a bound on a
/// parameter, a non-unimodular argument, a point on an excluded diagonal).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base class for failures of a numerical procedure on valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public NumericalError {
 public:
  explicit OverflowError(std::size_t degree)
      : NumericalError("non-finite value in Szego recursion at degree " +
                       std::to_string(degree)),
        degree_(degree) {}

  std::size_t degree() const noexcept { return degree_; }

 private:
  std::size_t degree_;
};

class ZeroFinderError : public NumericalError {
 public:
  ZeroFinderError(const std::string& what, std::string diagnostics)
      : NumericalError(what), diagnostics_(std::move(diagnostics)) {}

  /// Phase samples from the last sampling pass, one "theta,phase" per line.
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace opuc

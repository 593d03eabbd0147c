#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sensorplace {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix or vector has the wrong dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A node index is outside [0, n).
class IndexError : public Error {
 public:
  using Error::Error;
};

/// An argument violates an operation's precondition.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// No budget-respecting decision exists.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Instance too large for exhaustive enumeration.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree (solver vs oracle, closed form vs DARE) did not.
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// Random generation gave up after too many rejected samples.
class GenerationError : public Error {
 public:
  using Error::Error;
};

/// Instance file could not be parsed or failed validation. `field()` names
/// the offending JSON field when one is known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string field = {})
      : Error(message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Base for numerical failures (divergence, instability).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The Riccati fixed-point iteration did not settle within its iteration cap.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& message, Eigen::MatrixXd last_iterate,
                  long iterations)
      : NumericalError(message),
        last_iterate_(std::move(last_iterate)),
        iterations_(iterations) {}
  const Eigen::MatrixXd& last_iterate() const { return last_iterate_; }
  long iterations() const { return iterations_; }

 private:
  Eigen::MatrixXd last_iterate_;
  long iterations_;
};

/// A closed-loop matrix that must be Schur stable is not.
class InstabilityError : public NumericalError {
 public:
  InstabilityError(const std::string& message, double spectral_radius)
      : NumericalError(message), spectral_radius_(spectral_radius) {}
  double spectral_radius() const { return spectral_radius_; }

 private:
  double spectral_radius_;
};

}  // namespace sensorplace

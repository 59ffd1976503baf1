#pragma once

#include <stdexcept>
#include <string>

namespace expnet {

// Root of every error thrown by the library. Callers that only need to
// distinguish "bad input" from "numerical trouble" can catch the two
// intermediate classes below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidArgumentError : public InputError {
 public:
  using InputError::InputError;
};

class ComplexInputError : public InputError {
 public:
  using InputError::InputError;
};

class NearSingularError : public NumericalError {
 public:
  NearSingularError(const std::string& what, double rcond)
      : NumericalError(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class OverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularInputError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IllConditionedError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ActivationSingularError : public NumericalError {
 public:
  ActivationSingularError(const std::string& what, double rcond)
      : NumericalError(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

// A problem instance failed admission (e.g. X1 - X2 numerically singular).
class InstanceRejectedError : public Error {
 public:
  using Error::Error;
};

// Sampling gave up after too many consecutive rejections.
class MaxResampleError : public Error {
 public:
  using Error::Error;
};

}  // namespace expnet

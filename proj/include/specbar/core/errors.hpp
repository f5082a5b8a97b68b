#pragma once

#include <stdexcept>
#include <string>

namespace specbar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the domain of an operation (x < 0, lambda on an excluded set, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Violated precondition on the arguments themselves.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Malformed model file or model description.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A zero of the function sits on (or numerically at) the contour.
class BoundaryZeroError : public Error {
 public:
  using Error::Error;
};

/// Contour integral did not settle near an integer.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Several zeros could not be separated within the subdivision budget.
class ClusterUnresolvedError : public Error {
 public:
  ClusterUnresolvedError(const std::string& what, double x_lo, double x_hi, double y_lo, double y_hi,
                         int count)
      : Error(what), x_lo(x_lo), x_hi(x_hi), y_lo(y_lo), y_hi(y_hi), count(count) {}
  double x_lo, x_hi, y_lo, y_hi;
  int count;
};

/// ODE integration drifted (Wronskian identity violated).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested exactly at a branch point (band end).
class BranchPointError : public Error {
 public:
  using Error::Error;
};

/// Dense eigensolver failed to converge.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, long index) : Error(what), index(index) {}
  long index;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class SweepFailureError : public Error {
 public:
  using Error::Error;
};

}  // namespace specbar

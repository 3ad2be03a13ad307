#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lhvlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A vector or state that must have unit norm/trace does not.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

class NonUnitaryError : public Error {
 public:
  using Error::Error;
};

class NotEntangledError : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// An optimizer produced something it cannot stand behind.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// The decision could not be resolved at the requested tolerances.
class IndeterminateError : public Error {
 public:
  IndeterminateError(const std::string& what, double distance, double gap)
      : Error(what), distance_(distance), gap_(gap) {}

  double distance() const noexcept { return distance_; }
  double gap() const noexcept { return gap_; }

 private:
  double distance_;
  double gap_;
};

/// Enumeration would exceed the configured cap.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::size_t required, std::size_t cap)
      : Error(what), required_(required), cap_(cap) {}

  std::size_t required() const noexcept { return required_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t required_;
  std::size_t cap_;
};

}  // namespace lhvlab

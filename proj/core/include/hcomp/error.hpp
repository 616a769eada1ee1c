#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hcomp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: bad letters, unparsable spec strings, bad CSV rows.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A valid object used in an unsupported combination, e.g. a tree embedding
/// on a lattice.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A numeric argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A lookup outside a precomputed table. `required_radius` is the table
/// radius that would have been needed.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, int required_radius)
      : Error(what), required_radius_(required_radius) {}
  int required_radius() const noexcept { return required_radius_; }

 private:
  int required_radius_;
};

/// An enumeration or matrix that would exceed a configured cap.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::uint64_t predicted_size)
      : Error(what), predicted_size_(predicted_size) {}
  std::uint64_t predicted_size() const noexcept { return predicted_size_; }

 private:
  std::uint64_t predicted_size_;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

/// A growth hypothesis that fails at some scale `r`.
class HypothesisError : public Error {
 public:
  HypothesisError(const std::string& what, int violating_r)
      : Error(what), violating_r_(violating_r) {}
  int violating_r() const noexcept { return violating_r_; }

 private:
  int violating_r_;
};

}  // namespace hcomp

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qspec {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller-supplied data does not satisfy an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterative numerics did not converge; carries the offending indices.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, std::vector<std::size_t> indices = {})
      : std::runtime_error(what), indices_(std::move(indices)) {}

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

/// Evaluation too close to a singularity for the requested closed form.
class ConditioningError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Request exceeds a configured size bound.
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace qspec

#pragma once

#include <stdexcept>
#include <string>

namespace tqent {

// Shape or argument errors: wrong dimensions, bad partitions, malformed requests.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// A value is outside the numeric domain where a quantity is defined
// (q out of a validity window, x outside [0,1], non-PSD input, ...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Malformed state files.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Iterative routines (eigensolver, root finder) that failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tqent

#pragma once

#include <stdexcept>
#include <string>

namespace cafda {

/// Raised when an argument violates a documented domain invariant
/// (dimension mismatch, out-of-range parameter, non-finite pixel).
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a file cannot be read, decoded, encoded or written.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cafda

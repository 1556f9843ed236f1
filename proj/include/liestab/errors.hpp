#pragma once

#include <stdexcept>
#include <string>

namespace liestab {

/// Inputs whose shape or encoding is wrong (dimension mismatch, malformed file).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that are well formed but violate a mathematical precondition.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace liestab

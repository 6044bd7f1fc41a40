#pragma once

#include <stdexcept>
#include <string>

namespace qslab {

/// Precondition violation by the caller (bad dimensions, non-Hermitian input, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested problem exceeds the dense desk-scale limits.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An invariant that must hold by construction was violated. Indicates a bug.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qslab

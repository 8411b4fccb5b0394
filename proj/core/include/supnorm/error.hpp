#pragma once

#include <stdexcept>
#include <string>

namespace supnorm {

/// Raised when caller-supplied data or parameters violate a documented
/// precondition (bad grid, out-of-range index, malformed CSV, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raw data that could not be turned into curves. The message names the unit.
class IngestionError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A state the algorithms guarantee cannot happen was reached anyway.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace supnorm

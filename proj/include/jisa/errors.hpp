#pragma once

#include <stdexcept>
#include <string>

namespace jisa {

// Caller supplied something the operation cannot accept.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Image dimensions are not an exact multiple of the piece size.
class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

// Internal state broke an invariant; always a bug in the solver.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A session log cannot be replayed against the given inputs.
class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jisa

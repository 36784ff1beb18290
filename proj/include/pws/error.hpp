#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pws {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// NaN/Inf produced or received by a solver. `step` is the solver step index
// when known, otherwise -1.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, long step = -1)
      : Error(step >= 0 ? what + " (step " + std::to_string(step) + ")" : what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace pws

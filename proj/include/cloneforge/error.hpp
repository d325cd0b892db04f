#pragma once

#include <stdexcept>
#include <string>

namespace cloneforge {

/// Raised when an argument violates an operation's contract (bad dimensions,
/// out-of-range entries, mismatched arities or sizes).
class AlgebraError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function was called on an input that does not meet its precondition,
/// as opposed to the function reporting a negative answer.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed text input. `line()` is 1-based; 0 means "end of input".
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace cloneforge

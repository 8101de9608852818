#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace quadwin {

// Points are collinear, coincident, or the shape has no usable extent.
class DegenerateInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A decoded prediction does not form a strictly convex quad. Recoverable:
// evaluation counts such predictions as misses.
class NonConvexDecode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateWindow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidArea : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

}  // namespace quadwin

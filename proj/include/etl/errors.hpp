#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace etl {

/// Syntax error while parsing an expression string. `offset` is the byte
/// position in the input where parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation outside the natural domain of a function (log of a non-positive
/// number, derivative of abs at 0, a point outside an open interval, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: quadrature non-convergence, singular linear system,
/// sigma <= 0, |theta| >= 1 on the grid, profile leaving the ambient interval.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CLI configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace etl

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hs {

/// Malformed machine source, series spec or rate spec. `line()` is 1-based;
/// 0 means the error is not tied to a particular line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A natural number that is not the Gödel code of any valid program.
class InvalidEncoding : public std::runtime_error {
 public:
  InvalidEncoding(std::size_t position, const std::string& what)
      : std::runtime_error("invalid encoding at position " + std::to_string(position) + ": " + what),
        position_(position) {}

  /// Bit offset into the code, or instruction index for semantic errors.
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// A rate function queried outside its declared domain.
class RateUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace hs

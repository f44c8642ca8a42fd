#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace justnets {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (.pnet or .ccsps), with a 1-based location.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class NotEnabled : public Error {
 public:
  using Error::Error;
};

/// A net or term violates a structural requirement of the requested operation.
class InvalidNet : public Error {
 public:
  using Error::Error;
};

class InvalidPath : public Error {
 public:
  using Error::Error;
};

class TimeExceedsDeadline : public Error {
 public:
  using Error::Error;
};

}  // namespace justnets

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gaussmap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// A point or stencil outside the chart domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateImmersion : public Error {
 public:
  using Error::Error;
};

class NotConformal : public Error {
 public:
  using Error::Error;
};

class MultiplicityCrossing : public Error {
 public:
  using Error::Error;
};

class IllConditioned : public Error {
 public:
  using Error::Error;
};

class FixtureError : public Error {
 public:
  using Error::Error;
};

/// Syntax or name-resolution failure in the expression language. `offset` is
/// the 1-based byte column of the offending token (length + 1 at end of input).
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::string expected = {})
      : Error(message + " at offset " + std::to_string(offset)),
        offset_(offset),
        expected_(std::move(expected)) {}
  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

class EvalError : public Error {
 public:
  EvalError(const std::string& message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Run configuration rejected. Line and column are 1-based, 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0, int column = 0)
      : Error(line > 0 ? message + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"
                       : message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace gaussmap

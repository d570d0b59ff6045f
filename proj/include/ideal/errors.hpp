#pragma once

#include <stdexcept>
#include <string>

namespace ideal {

// Bad user input: malformed files, inconsistent shapes, unknown ids.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Syntax-level failure while reading a file; carries line/column context.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& msg, long line, long column)
      : ValidationError(msg + " (line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ")"),
        line(line),
        column(column) {}
  long line;
  long column;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical linear algebra failure (should not occur for SPD inputs).
class LinAlgError : public std::runtime_error {
 public:
  explicit LinAlgError(const std::string& msg) : std::runtime_error(msg) {}
};

// Operation defined but not available for the given configuration.
class UnsupportedError : public ValidationError {
 public:
  explicit UnsupportedError(const std::string& msg) : ValidationError(msg) {}
};

}  // namespace ideal

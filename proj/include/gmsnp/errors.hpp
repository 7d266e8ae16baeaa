#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmsnp {

/// Invalid input data: malformed structures, bad files, inconsistent arguments.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SignatureMismatch : public DataError {
 public:
  using DataError::DataError;
};

/// A configured size bound (vertex count, dual domain, pattern count) was exceeded.
class SizeGuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search ran out of its node budget. Callers report "unknown", never "no".
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A randomized construction failed its verification on every attempt.
class RetriesExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : DataError(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace gmsnp

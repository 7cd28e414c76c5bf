#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pnucleus {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input could not be parsed; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateEdge : public ParseError {
 public:
  using ParseError::ParseError;
};

class BadProbability : public ParseError {
 public:
  using ParseError::ParseError;
};

class SelfLoop : public ParseError {
 public:
  using ParseError::ParseError;
};

// An id (edge, triangle, ...) outside the valid range.
class IndexError : public Error {
 public:
  using Error::Error;
};

// An argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration refused: the instance exceeds the configured budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace pnucleus

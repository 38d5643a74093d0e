#pragma once

#include <stdexcept>
#include <string>

namespace lexent {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Arguments violate an operation's precondition (dimension mismatch, k out of
// range, degenerate labels, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace lexent

#ifndef SBNMF_ERRORS_HPP
#define SBNMF_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sbn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Caller supplied a value outside an operation's contract (bad index,
/// mismatched dimensions, non-finite parameter, ...).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line and column.
class ParseError : public Error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// An enumeration or size guard refused to run (e.g. too many hidden nodes
/// for exact summation).
class GuardError : public Error {
public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace sbn

#endif  // SBNMF_ERRORS_HPP

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robsurf {

// Diagnostic category carried by every library error. The CLI maps each
// category to a distinct exit status.
enum class ErrorKind {
  input,          // bad index, missing link, malformed argument
  domain,         // metric precondition not met (too few nodes, no links...)
  configuration,  // incompatible scenario / invalid run plan
  numeric,        // solver failed to converge
  degenerate,     // no variance / zero normalization denominator
  parse,          // malformed topology or manifest file
  io              // filesystem failures
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::domain: return "domain";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what)
      : Error(ErrorKind::configuration, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& what)
      : Error(ErrorKind::degenerate, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(ErrorKind::parse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based; 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace robsurf

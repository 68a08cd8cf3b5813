#pragma once

#include <stdexcept>
#include <string>

namespace perclab {

// Error taxonomy. The CLI maps each category onto an exit status.
enum class ErrorKind {
  parse,         // malformed input text or configuration
  precondition,  // arguments outside an operation's domain
  validity,      // finite stand-in cannot represent the requested infinite-graph quantity
  convergence,   // iterative solver hit its cap
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::parse, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::precondition, what) {}
};

// Raised when a result would be contaminated by the boundary of a finite stand-in graph.
class ValidityError : public Error {
 public:
  explicit ValidityError(const std::string& what) : Error(ErrorKind::validity, what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double bracket_low, double bracket_high, long iterations)
      : Error(ErrorKind::convergence, what),
        bracket_low_(bracket_low),
        bracket_high_(bracket_high),
        iterations_(iterations) {}
  double bracket_low() const noexcept { return bracket_low_; }
  double bracket_high() const noexcept { return bracket_high_; }
  long iterations() const noexcept { return iterations_; }

 private:
  double bracket_low_;
  double bracket_high_;
  long iterations_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::validity: return "validity";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace perclab

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbb {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejection sampling could not meet the connectivity requirement.
class GenerationExhausted : public Error {
 public:
  using Error::Error;
};

// Malformed instance / solution / LP text. Carries the 1-based line and the
// offending field name.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& what)
      : Error("line " + std::to_string(line) + ", field '" + field + "': " + what),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

class DisconnectedInput : public Error {
 public:
  using Error::Error;
};

class NotBiconnectedInput : public Error {
 public:
  using Error::Error;
};

class TooSmall : public Error {
 public:
  using Error::Error;
};

// The host graph's own vertex connectivity is below the requested level.
class InfeasibleConnectivity : public Error {
 public:
  using Error::Error;
};

class InfeasibleGenome : public Error {
 public:
  using Error::Error;
};

class IrreparableGenome : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class Infeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace rbb

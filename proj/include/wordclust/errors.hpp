#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wordclust {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input parsed fine but contained nothing usable.
class EmptyDataError : public Error {
 public:
  using Error::Error;
};

// Bad configuration value (schedule constants, flag combinations).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Vocabulary or structural mismatch discovered while computing.
class DataError : public Error {
 public:
  using Error::Error;
};

// Caller violated an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace wordclust

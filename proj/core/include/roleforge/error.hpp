#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roleforge {

// Base for every error raised by the library. Callers that only care about
// "something failed" catch this; the subclasses let the CLI map failures to
// distinct messages.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

// A quantity is mathematically undefined for the given input
// (zero degree, zero arcs, fewer than two groups...).
class UndefinedValueError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Clustering or variance structure makes an index meaningless
// (coincident centroids, zero within-group variance).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

class DependencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace roleforge

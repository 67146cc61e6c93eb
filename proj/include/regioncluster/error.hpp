#pragma once

#include <stdexcept>
#include <string>

namespace regioncluster {

// Base for every error caused by user-supplied input (files, config, arguments).
// The CLI maps these to exit status 2; anything else is an internal error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text: bad CSV row, unparsable number, broken Newick.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// A reference to an id that does not exist in the relevant catalog.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Phi-square between two all-zero profiles.
class UndefinedDistanceError : public Error {
 public:
  using Error::Error;
};

}  // namespace regioncluster

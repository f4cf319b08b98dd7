#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ierl {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message, const std::string& source = {})
      : Error((source.empty() ? std::string() : source + ": ") + "line " + std::to_string(line) +
              ": " + message),
        line_(line),
        message_(message) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::string message_;
};

// Well-formed data the algorithms cannot work with (missing sentence,
// unencodable sentence, empty aggregation set, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// Out-of-range configuration or conflicting options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Objective became non-finite during iterative solving.
class DivergedError : public Error {
 public:
  explicit DivergedError(long step)
      : Error("optimization diverged at step " + std::to_string(step) +
              " (learning rate too large?)"),
        step_(step) {}

  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace ierl

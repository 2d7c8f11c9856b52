#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace prefboard {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violated a documented precondition or schema.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A record in a line-delimited file could not be parsed.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// HTTP or socket failure talking to an external provider.
class TransportError : public Error {
 public:
  explicit TransportError(const std::string& message,
                          std::optional<std::size_t> batch_index = std::nullopt)
      : Error(batch_index ? message + " (batch " + std::to_string(*batch_index) + ")"
                          : message),
        batch_index_(batch_index) {}

  std::optional<std::size_t> batch_index() const noexcept { return batch_index_; }

 private:
  std::optional<std::size_t> batch_index_;
};

/// Numerical failure during optimization (NaN/inf loss).
class NumericError : public Error {
 public:
  NumericError(const std::string& message, std::size_t step)
      : Error(message + " at step " + std::to_string(step)), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace prefboard

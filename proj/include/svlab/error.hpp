#pragma once

#include <stdexcept>
#include <string>

namespace svlab {

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition failures on caller-supplied data.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Configuration file or flag problems; carries the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Raised when a simulation leaves its certified range or produces non-finite state.
class NumericalAbort : public Error {
 public:
  using Error::Error;
};

// A declared mathematical property (weight class, nonlinearity constant, ...) is violated.
class PropertyViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace svlab

#pragma once

#include <stdexcept>
#include <string>

namespace anticyc {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorKind {
  usage = 1,
  configuration = 2,
  data_missing = 3,
  search_exhausted = 4,
  invariant_violation = 5,
};

/// Base of every error raised by the library. `module` names the component
/// that raised it so the CLI can report provenance.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
  std::string module_;
};

class UsageError : public Error {
 public:
  UsageError(std::string module, const std::string& what)
      : Error(ErrorKind::usage, std::move(module), what) {}
};

class ConfigurationError : public Error {
 public:
  ConfigurationError(std::string module, const std::string& what)
      : Error(ErrorKind::configuration, std::move(module), what) {}
};

class DataMissingError : public Error {
 public:
  DataMissingError(std::string module, const std::string& what)
      : Error(ErrorKind::data_missing, std::move(module), what) {}
};

/// Bounded searches that gave up, and resource ceilings that were hit.
class SearchExhaustedError : public Error {
 public:
  SearchExhaustedError(std::string module, const std::string& what)
      : Error(ErrorKind::search_exhausted, std::move(module), what) {}
};

class InvariantViolation : public Error {
 public:
  InvariantViolation(std::string module, const std::string& what)
      : Error(ErrorKind::invariant_violation, std::move(module), what) {}
};

}  // namespace anticyc

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace paneldiag {

// Base for all library errors. `module` names the component that raised the
// error so the CLI can report provenance; `kind` feeds its exit-code mapping
// (validation 2, numerical 3, io 4).
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& message)
      : std::runtime_error(message), module_(std::move(module)) {}

  const std::string& module() const noexcept { return module_; }
  virtual const char* kind() const noexcept = 0;

 private:
  std::string module_;
};

// Malformed inputs: bad panel shape, unknown columns, inconsistent config.
class ValidationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "validation"; }
};

// Rank deficiency, ill-conditioned factorizations, undefined statistics.
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical"; }
};

// File system and serialization failures.
class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
};

}  // namespace paneldiag

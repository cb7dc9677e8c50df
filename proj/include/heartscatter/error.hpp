#pragma once

#include <stdexcept>
#include <string>

namespace hs {

// Raised by every computation that rejects its input or detects an
// inconsistency. The CLI maps it to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration (exit code 1).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// A broken-line trace met a joint, a wall boundary or a wall plane.
class NonGenericError : public Error {
 public:
  explicit NonGenericError(const std::string& what) : Error(what) {}
};

// An order pass inserted more walls than the configured budget.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& what) : Error(what) {}
};

}  // namespace hs

#pragma once

#include <stdexcept>
#include <string>

namespace ctx {

enum class ErrorKind {
  InvalidScenario,
  ScenarioTooLarge,
  InvalidBox,
  IncompatibleBox,
  InconsistentBox,
  NotRepresentable,
  BadPermutation,
  UnsupportedScenario,
  UndefinedBound,
  SolverFailure,
  Parse,
  PropertyViolation,
};

const char* to_string(ErrorKind kind);

/// Every library failure is reported through this type; `kind()` lets the
/// CLI map failures onto its documented exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ctx

#pragma once

#include <stdexcept>
#include <string>

namespace coopt {

struct DisconnectedNetwork : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownLine : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownBus : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownScenario : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Carries the offending field path, e.g. "scenarios[2].probability".
struct ValidationError : std::runtime_error {
  ValidationError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), field_path(std::move(path)) {}
  std::string field_path;
};

struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleProblem : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MissingDuals : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SchemeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssumptionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace coopt

#pragma once

#include <stdexcept>
#include <string>

namespace rigidlab {

// Module-level failure conditions. All carry a human-readable message; the
// seed-bearing ones embed the offending seed so the run can be reproduced.

struct DivergentMoment : std::runtime_error {
  explicit DivergentMoment(const std::string& msg) : std::runtime_error(msg) {}
};

struct QuadratureFailure : std::runtime_error {
  explicit QuadratureFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientLadder : std::runtime_error {
  explicit InsufficientLadder(const std::string& msg) : std::runtime_error(msg) {}
};

struct TableNotBuilt : std::runtime_error {
  explicit TableNotBuilt(const std::string& msg) : std::runtime_error(msg) {}
};

struct RootFindingDiverged : std::runtime_error {
  RootFindingDiverged(const std::string& msg, unsigned long long seed)
      : std::runtime_error(msg + " (seed=" + std::to_string(seed) + ")"), seed(seed) {}
  unsigned long long seed;
};

struct ConditioningFailure : std::runtime_error {
  explicit ConditioningFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotContraction : std::runtime_error {
  explicit NotContraction(const std::string& msg) : std::runtime_error(msg) {}
};

struct BadParams : std::invalid_argument {
  explicit BadParams(const std::string& msg) : std::invalid_argument(msg) {}
};

struct WindowTooSmall : std::runtime_error {
  explicit WindowTooSmall(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rigidlab

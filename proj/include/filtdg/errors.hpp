#pragma once

#include <stdexcept>
#include <string>

namespace filtdg {

/// Invalid run configuration or unknown benchmark / boundary rule.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-physical solver state (negative density or pressure, NaN).
class StateError : public std::runtime_error {
 public:
  StateError(const std::string& what, int cell = -1)
      : std::runtime_error(what), cell_(cell) {}
  int cell() const noexcept { return cell_; }

 private:
  int cell_;
};

/// Numerical routine failed to converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace filtdg

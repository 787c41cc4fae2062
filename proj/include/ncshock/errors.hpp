#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncshock {

/// Invalid parameters, unsupported orders, malformed config files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A non-finite value appeared during a solve.
class BlowupError : public std::runtime_error {
 public:
  BlowupError(const std::string& what, std::size_t node, double time = -1.0,
              int stage = -1)
      : std::runtime_error(what), node_(node), time_(time), stage_(stage) {}

  std::size_t node() const { return node_; }
  double time() const { return time_; }
  int stage() const { return stage_; }

 private:
  std::size_t node_;
  double time_;
  int stage_;
};

/// A state left the domain of definition of a constitutive law
/// (pressure law, thin-film positivity).
class DomainError : public std::runtime_error {
 public:
  DomainError(const std::string& what, std::size_t node = 0)
      : std::runtime_error(what), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

class PositivityError : public DomainError {
 public:
  using DomainError::DomainError;
};

class LinearSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shock speed requested for two identical states.
class DegenerateShockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ncshock

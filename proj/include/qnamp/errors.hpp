#pragma once

#include <stdexcept>
#include <string>

namespace qnamp {

/// Malformed or out-of-range configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physically singular or invalid evaluation. `source` names the element
/// that raised it (e.g. "amplifier.susceptibility").
class PhysicsError : public std::runtime_error {
 public:
  PhysicsError(std::string source, const std::string& what)
      : std::runtime_error(source + ": " + what), source_(std::move(source)) {}
  const std::string& source() const noexcept { return source_; }

 private:
  std::string source_;
};

/// An optimization problem with no admissible point.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qnamp

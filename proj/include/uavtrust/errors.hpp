#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace uavtrust {

// Fewer UAVs than a peer comparison needs.
class ClusterTooSmallError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class EmptyWindowError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configuration violates a named invariant. The message starts with the
// invariant name.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string invariant, const std::string& detail)
      : std::invalid_argument(invariant + ": " + detail), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

// Malformed scenario file; message carries line/column or the field path.
class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uavtrust

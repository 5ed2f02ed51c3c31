#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aif {

enum class ErrorKind {
  InvalidModel,
  InvalidHistory,
  DimensionMismatch,
  HorizonOverflow,
  ZeroEvidence,
  ZeroProbabilityObservation,
  PolicySpaceOverflow,
  StepAfterDone,
  MalformedTrajectory,
  Config,
  Parse,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind alongside the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace aif

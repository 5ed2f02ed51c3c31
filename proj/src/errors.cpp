#include "aif/errors.hpp"

namespace aif {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::InvalidHistory: return "InvalidHistory";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::HorizonOverflow: return "HorizonOverflow";
    case ErrorKind::ZeroEvidence: return "ZeroEvidence";
    case ErrorKind::ZeroProbabilityObservation: return "ZeroProbabilityObservation";
    case ErrorKind::PolicySpaceOverflow: return "PolicySpaceOverflow";
    case ErrorKind::StepAfterDone: return "StepAfterDone";
    case ErrorKind::MalformedTrajectory: return "MalformedTrajectory";
    case ErrorKind::Config: return "Config";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace aif

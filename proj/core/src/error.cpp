#include "pairscan/error.hpp"

namespace pairscan {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidBox: return "InvalidBox";
    case ErrorKind::DegeneratePoint: return "DegeneratePoint";
    case ErrorKind::SingularHomography: return "SingularHomography";
    case ErrorKind::EmptyIntersection: return "EmptyIntersection";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::MissingTelemetry: return "MissingTelemetry";
    case ErrorKind::InsufficientFeatures: return "InsufficientFeatures";
    case ErrorKind::NoViableCandidate: return "NoViableCandidate";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::ConsensusFailure: return "ConsensusFailure";
    case ErrorKind::PlacementOutOfBounds: return "PlacementOutOfBounds";
    case ErrorKind::EmptyMask: return "EmptyMask";
    case ErrorKind::DummyPoolExhausted: return "DummyPoolExhausted";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::ProtocolError: return "ProtocolError";
    case ErrorKind::ExhaustedRetries: return "ExhaustedRetries";
    case ErrorKind::UnknownSample: return "UnknownSample";
    case ErrorKind::EmptyEvaluation: return "EmptyEvaluation";
    case ErrorKind::TooFewBoxes: return "TooFewBoxes";
    case ErrorKind::IdMismatch: return "IdMismatch";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace pairscan

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairscan {

enum class ErrorKind {
  InvalidArgument,
  InvalidBox,
  DegeneratePoint,
  SingularHomography,
  EmptyIntersection,
  ShapeMismatch,
  MissingTelemetry,
  InsufficientFeatures,
  NoViableCandidate,
  DegenerateConfiguration,
  RankDeficient,
  ConsensusFailure,
  PlacementOutOfBounds,
  EmptyMask,
  DummyPoolExhausted,
  Timeout,
  ProtocolError,
  ExhaustedRetries,
  UnknownSample,
  EmptyEvaluation,
  TooFewBoxes,
  IdMismatch,
  Io,
  Parse,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

// Endpoint-level failures share an exit code at the CLI.
inline bool is_endpoint_error(ErrorKind kind) noexcept {
  return kind == ErrorKind::Timeout || kind == ErrorKind::ProtocolError ||
         kind == ErrorKind::ExhaustedRetries;
}

}  // namespace pairscan

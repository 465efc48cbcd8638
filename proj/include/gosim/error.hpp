#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gosim {

enum class ErrorCode {
  // ontology
  CycleDetected,
  MissingRoot,
  DanglingParent,
  MalformedStanza,
  // annotations
  MalformedLine,
  EmptyCorpus,
  // lookups and information content
  UnknownTerm,
  ZeroTotal,
  UndefinedProbability,
  UnannotatedTerm,
  DifferentNamespace,
  ZeroUnion,
  EmptySet,
  // analysis
  NonPositiveScore,
  DegenerateRange,
  TooFewIntervalsNonEmpty,
  TooFewConditions,
  NoNeighbors,
  EmptyInput,
  IncompatibleHistograms,
  EmptyIntersection,
  InsufficientUniverse,
  InsufficientNegatives,
  // plumbing
  MissingArtifact,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported through this type; `code()` identifies
// the failure class, `what()` carries the human readable context.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The context without the code prefix.
  const std::string& message() const noexcept { return message_; }

private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace gosim

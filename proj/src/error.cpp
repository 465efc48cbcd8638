#include "gosim/error.hpp"

namespace gosim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::MissingRoot: return "MissingRoot";
    case ErrorCode::DanglingParent: return "DanglingParent";
    case ErrorCode::MalformedStanza: return "MalformedStanza";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::UnknownTerm: return "UnknownTerm";
    case ErrorCode::ZeroTotal: return "ZeroTotal";
    case ErrorCode::UndefinedProbability: return "UndefinedProbability";
    case ErrorCode::UnannotatedTerm: return "UnannotatedTerm";
    case ErrorCode::DifferentNamespace: return "DifferentNamespace";
    case ErrorCode::ZeroUnion: return "ZeroUnion";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::NonPositiveScore: return "NonPositiveScore";
    case ErrorCode::DegenerateRange: return "DegenerateRange";
    case ErrorCode::TooFewIntervalsNonEmpty: return "TooFewIntervalsNonEmpty";
    case ErrorCode::TooFewConditions: return "TooFewConditions";
    case ErrorCode::NoNeighbors: return "NoNeighbors";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::IncompatibleHistograms: return "IncompatibleHistograms";
    case ErrorCode::EmptyIntersection: return "EmptyIntersection";
    case ErrorCode::InsufficientUniverse: return "InsufficientUniverse";
    case ErrorCode::InsufficientNegatives: return "InsufficientNegatives";
    case ErrorCode::MissingArtifact: return "MissingArtifact";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace gosim

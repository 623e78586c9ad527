#include "cub/error.hpp"

namespace cub {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::UnknownTerm: return "UnknownTerm";
    case ErrorCode::DuplicateStudentId: return "DuplicateStudentId";
    case ErrorCode::EmptyRoster: return "EmptyRoster";
    case ErrorCode::RuleCountMismatch: return "RuleCountMismatch";
    case ErrorCode::DuplicateTerm: return "DuplicateTerm";
    case ErrorCode::InvalidVocabulary: return "InvalidVocabulary";
    case ErrorCode::InvalidSize: return "InvalidSize";
    case ErrorCode::OutOfUniverse: return "OutOfUniverse";
    case ErrorCode::ZeroArea: return "ZeroArea";
    case ErrorCode::IncompleteRuleBase: return "IncompleteRuleBase";
    case ErrorCode::DegenerateCenters: return "DegenerateCenters";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::MismatchedRosters: return "MismatchedRosters";
    case ErrorCode::SpecMismatch: return "SpecMismatch";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ExhaustedRetries: return "ExhaustedRetries";
    case ErrorCode::RosterMismatch: return "RosterMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace cub

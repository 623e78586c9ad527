#ifndef CUB_ERROR_HPP
#define CUB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace cub {

enum class ErrorCode {
  // survey
  MalformedRow,
  UnknownTerm,
  DuplicateStudentId,
  EmptyRoster,
  RuleCountMismatch,
  DuplicateTerm,
  InvalidVocabulary,
  // fis
  InvalidSize,
  OutOfUniverse,
  ZeroArea,
  IncompleteRuleBase,
  // fcm
  DegenerateCenters,
  // classify
  EmptyCluster,
  MismatchedRosters,
  // assign
  SpecMismatch,
  InvalidPartition,
  TooLarge,
  ExhaustedRetries,
  // evaluate
  RosterMismatch,
  // io
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cub

#endif  // CUB_ERROR_HPP

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gutinstinct {

/// Every failure the platform reports. The API layer maps each code to
/// exactly one HTTP status, and code_name() gives the stable wire string.
enum class ErrorCode {
  // validation
  EmptyText,
  NoTags,
  IndexOutOfRange,
  UnknownKind,
  InvalidArgument,
  EmptyCorpus,
  ConfigInvalid,
  SeedParseError,
  // authentication / authorization
  Unauthenticated,
  InvalidCredentials,
  NotAuthorized,
  // lookup
  UnknownUser,
  UnknownQuestion,
  UnknownParent,
  UnknownTopic,
  UnknownSection,
  UnknownItem,
  UnknownExperiment,
  NotFound,
  // conflict
  NotQualified,
  AnswerLocked,
  CrossQuestionParent,
  DuplicateId,
  // internal
  ModelNotBuilt,
  SchemaError,
  IoError,
  AddressInUse,
};

std::string_view code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace gutinstinct

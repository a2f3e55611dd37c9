#include "gutinstinct/common/error.hpp"

#include <array>
#include <cstdio>

#include "gutinstinct/common/hash.hpp"

namespace gutinstinct {

std::string_view code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyText: return "EMPTY_TEXT";
    case ErrorCode::NoTags: return "NO_TAGS";
    case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::UnknownKind: return "UNKNOWN_KIND";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::EmptyCorpus: return "EMPTY_CORPUS";
    case ErrorCode::ConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::SeedParseError: return "SEED_PARSE_ERROR";
    case ErrorCode::Unauthenticated: return "UNAUTHENTICATED";
    case ErrorCode::InvalidCredentials: return "INVALID_CREDENTIALS";
    case ErrorCode::NotAuthorized: return "NOT_AUTHORIZED";
    case ErrorCode::UnknownUser: return "UNKNOWN_USER";
    case ErrorCode::UnknownQuestion: return "UNKNOWN_QUESTION";
    case ErrorCode::UnknownParent: return "UNKNOWN_PARENT";
    case ErrorCode::UnknownTopic: return "UNKNOWN_TOPIC";
    case ErrorCode::UnknownSection: return "UNKNOWN_SECTION";
    case ErrorCode::UnknownItem: return "UNKNOWN_ITEM";
    case ErrorCode::UnknownExperiment: return "UNKNOWN_EXPERIMENT";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::NotQualified: return "NOT_QUALIFIED";
    case ErrorCode::AnswerLocked: return "ANSWER_LOCKED";
    case ErrorCode::CrossQuestionParent: return "CROSS_QUESTION_PARENT";
    case ErrorCode::DuplicateId: return "DUPLICATE_ID";
    case ErrorCode::ModelNotBuilt: return "MODEL_NOT_BUILT";
    case ErrorCode::SchemaError: return "SCHEMA_ERROR";
    case ErrorCode::IoError: return "IO_ERROR";
    case ErrorCode::AddressInUse: return "ADDRESS_IN_USE";
  }
  return "UNKNOWN";
}

std::string to_hex64(std::uint64_t value) {
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(value));
  return std::string(buf.data(), 16);
}

}  // namespace gutinstinct

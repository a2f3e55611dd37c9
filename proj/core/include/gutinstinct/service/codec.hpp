#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "gutinstinct/service/state.hpp"

// JSON mapping for every persisted record. The same shapes are used on the
// wire. Timestamps are integer milliseconds since the Unix epoch; absent
// optionals are null.

namespace gutinstinct::board {
void to_json(nlohmann::json& j, const UserAccount& v);
void from_json(const nlohmann::json& j, UserAccount& v);
void to_json(nlohmann::json& j, const Tag& v);
void from_json(const nlohmann::json& j, Tag& v);
void to_json(nlohmann::json& j, const Question& v);
void from_json(const nlohmann::json& j, Question& v);
void to_json(nlohmann::json& j, const Level1Response& v);
void from_json(const nlohmann::json& j, Level1Response& v);
void to_json(nlohmann::json& j, const Level2Response& v);
void from_json(const nlohmann::json& j, Level2Response& v);
void to_json(nlohmann::json& j, const Comment& v);
void from_json(const nlohmann::json& j, Comment& v);
void to_json(nlohmann::json& j, const Vote& v);
void from_json(const nlohmann::json& j, Vote& v);

std::string_view role_name(Role r) noexcept;
Role parse_role(std::string_view s);
std::string_view answer_name(Level1Answer a) noexcept;
Level1Answer parse_answer(std::string_view s);
std::string_view direction_name(VoteDirection d) noexcept;
VoteDirection parse_direction(std::string_view s);
}  // namespace gutinstinct::board

namespace gutinstinct::router {
void to_json(nlohmann::json& j, const ManualMapping& v);
void from_json(const nlohmann::json& j, ManualMapping& v);
void to_json(nlohmann::json& j, const UnmappedQueueEntry& v);
void from_json(const nlohmann::json& j, UnmappedQueueEntry& v);
void to_json(nlohmann::json& j, const RoutingResult& v);

/// Inspection export: {vocabulary, idf, centroids: {topic: {token: weight}}}.
nlohmann::json model_to_json(const TopicVectorModel& model);
}  // namespace gutinstinct::router

namespace gutinstinct::learning {
void to_json(nlohmann::json& j, const ContentSection& v);
void from_json(const nlohmann::json& j, ContentSection& v);
void to_json(nlohmann::json& j, const QuizItem& v);
void from_json(const nlohmann::json& j, QuizItem& v);
void to_json(nlohmann::json& j, const Topic& v);
void from_json(const nlohmann::json& j, Topic& v);
void to_json(nlohmann::json& j, const ProgressRecord& v);
void from_json(const nlohmann::json& j, ProgressRecord& v);
void to_json(nlohmann::json& j, const ProgressSummary& v);
}  // namespace gutinstinct::learning

namespace gutinstinct::experiment {
void to_json(nlohmann::json& j, const ExperimentDef& v);
void from_json(const nlohmann::json& j, ExperimentDef& v);
void to_json(nlohmann::json& j, const Assignment& v);
void from_json(const nlohmann::json& j, Assignment& v);
void to_json(nlohmann::json& j, const EngagementEvent& v);
void from_json(const nlohmann::json& j, EngagementEvent& v);
void to_json(nlohmann::json& j, const MetricsReport& v);
}  // namespace gutinstinct::experiment

namespace gutinstinct::service {

nlohmann::json encode_state(const State& state);

/// Throws Error{SchemaError} on any structural problem, a schema_version
/// other than kSchemaVersion, or a stored score that disagrees with the votes.
State decode_state(const nlohmann::json& j);

/// Compact dump with sorted keys; byte-identical for equal states.
std::string canonical_dump(const nlohmann::json& j);

}  // namespace gutinstinct::service

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gutinstinct/common/ids.hpp"
#include "gutinstinct/common/time.hpp"
#include "gutinstinct/learning/learning.hpp"

namespace gutinstinct::experiment {

enum class Strategy { hash, balanced };

struct ExperimentDef {
  std::string experiment_id;
  std::vector<std::string> conditions;
  std::string salt;
  Strategy strategy{Strategy::hash};

  friend bool operator==(const ExperimentDef&, const ExperimentDef&) = default;
};

/// Throws Error{ConfigInvalid} unless there are >= 2 unique conditions and a
/// non-empty id and salt.
void validate(const ExperimentDef& def);

/// The two pre-registered designs: material type (tutorial / article /
/// expert examples) and working-while-learning vs. learning only.
std::vector<ExperimentDef> default_experiments();

struct Assignment {
  UserId user_id;
  std::string experiment_id;
  std::string condition_id;
  Timestamp at;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

enum class EventKind {
  section_view,
  video_play,
  quiz_answer,
  question_created,
  question_edited,
  level1_answered,
  level2_answered,
  comment_added,
  vote_cast,
  board_view,
  login,
};

inline constexpr std::size_t kEventKindCount = 11;

std::string_view kind_name(EventKind kind) noexcept;
/// Throws Error{UnknownKind}.
EventKind parse_kind(std::string_view name);
const std::array<EventKind, kEventKindCount>& all_kinds() noexcept;

struct EngagementEvent {
  EventId event_id;
  UserId user_id;
  EventKind kind{EventKind::login};
  std::optional<std::string> subject_id;
  Timestamp at;

  friend bool operator==(const EngagementEvent&, const EngagementEvent&) = default;
};

struct Session {
  Timestamp start;
  Timestamp end;
  double active_seconds{0.0};

  friend bool operator==(const Session&, const Session&) = default;
};

inline constexpr Duration kDefaultSessionGap = std::chrono::minutes(30);

/// Sorts the timestamps and splits wherever the gap between neighbours is
/// strictly greater than `gap`. A session's active time is last - first.
/// Throws InvalidArgument when gap <= 0.
std::vector<Session> sessionize(std::vector<Timestamp> times, Duration gap);

struct MetricsReport {
  UserId user_id;
  std::map<std::string, std::string> conditions;  // experiment_id -> condition_id
  std::uint64_t session_count{0};
  double total_active_seconds{0.0};
  std::array<std::uint64_t, kEventKindCount> counts{};
  std::map<TopicId, learning::ProgressSummary> topics;

  std::uint64_t count(EventKind kind) const { return counts[static_cast<std::size_t>(kind)]; }
  std::uint64_t total_events() const;
};

/// H(salt || 0x1f || user_id || 0x1f || experiment_id) with 64-bit FNV-1a,
/// user_id written in decimal.
std::uint64_t bucket_hash(std::string_view salt, UserId user_id, std::string_view experiment_id);

/// Export pseudonym: hex FNV-1a of (salt || 0x1f || user_id).
std::string pseudonymize(std::string_view salt, UserId user_id);

class Experiments {
 public:
  struct Data {
    std::map<std::string, ExperimentDef> definitions;
    std::map<std::pair<std::string, UserId>, Assignment> assignments;
    std::vector<EngagementEvent> events;
    std::uint64_t next_event_id{1};

    friend bool operator==(const Data&, const Data&) = default;
  };

  Experiments() = default;
  explicit Experiments(Data data) : data_(std::move(data)) {}

  const Data& data() const noexcept { return data_; }

  /// Adds or replaces definitions atomically. A replacement must keep every
  /// condition that already has assignees.
  void define(std::vector<ExperimentDef> defs);

  const ExperimentDef& definition(std::string_view experiment_id) const;

  /// Idempotent: an existing assignment is returned unchanged.
  const Assignment& assign(UserId user_id, std::string_view experiment_id, Timestamp now);

  const Assignment* assignment(UserId user_id, std::string_view experiment_id) const;
  std::map<std::string, std::uint64_t> condition_counts(std::string_view experiment_id) const;

  const EngagementEvent& log_event(UserId user_id, EventKind kind,
                                   std::optional<std::string> subject_id, Timestamp at);
  std::vector<EngagementEvent> events_for(UserId user_id) const;

  MetricsReport compute_metrics(UserId user_id, const learning::Learning& learning,
                                Duration gap = kDefaultSessionGap) const;

  /// RFC 4180 CSV (CRLF line ends), one row per assigned user ordered by
  /// user id. Undefined accuracies are empty cells.
  std::string export_dataset(std::string_view experiment_id, const learning::Learning& learning,
                             std::string_view pseudonym_salt,
                             Duration gap = kDefaultSessionGap) const;

  friend bool operator==(const Experiments&, const Experiments&) = default;

 private:
  Data data_;
};

// CSV helpers, exposed for tests and the admin tool.
std::string csv_escape(std::string_view field);
std::string format_number(double value);

}  // namespace gutinstinct::experiment

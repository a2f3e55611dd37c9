#include "gutinstinct/experiment/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/common/hash.hpp"
#include "gutinstinct/common/strings.hpp"

namespace gutinstinct::experiment {
namespace {

constexpr std::array<EventKind, kEventKindCount> kKinds = {
    EventKind::section_view,    EventKind::video_play,      EventKind::quiz_answer,
    EventKind::question_created, EventKind::question_edited, EventKind::level1_answered,
    EventKind::level2_answered, EventKind::comment_added,   EventKind::vote_cast,
    EventKind::board_view,      EventKind::login,
};

constexpr std::string_view kSeparator{"\x1f", 1};

}  // namespace

void validate(const ExperimentDef& def) {
  if (is_blank(def.experiment_id)) {
    throw Error(ErrorCode::ConfigInvalid, "experiment_id must not be empty");
  }
  if (def.conditions.size() < 2) {
    throw Error(ErrorCode::ConfigInvalid,
                "experiment '" + def.experiment_id + "' needs at least two conditions");
  }
  std::set<std::string> seen;
  for (const auto& c : def.conditions) {
    if (is_blank(c) || !seen.insert(c).second) {
      throw Error(ErrorCode::ConfigInvalid,
                  "experiment '" + def.experiment_id + "' has an empty or duplicate condition");
    }
  }
  if (def.salt.empty()) {
    throw Error(ErrorCode::ConfigInvalid, "experiment '" + def.experiment_id + "' needs a salt");
  }
}

std::vector<ExperimentDef> default_experiments() {
  return {
      ExperimentDef{"h1_material", {"tutorial", "article", "expert_examples"}, "h1-material-v1",
                    Strategy::balanced},
      ExperimentDef{"h23_worklearn", {"work_learn", "learn_only"}, "h23-worklearn-v1",
                    Strategy::hash},
  };
}

std::string_view kind_name(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::section_view: return "section_view";
    case EventKind::video_play: return "video_play";
    case EventKind::quiz_answer: return "quiz_answer";
    case EventKind::question_created: return "question_created";
    case EventKind::question_edited: return "question_edited";
    case EventKind::level1_answered: return "level1_answered";
    case EventKind::level2_answered: return "level2_answered";
    case EventKind::comment_added: return "comment_added";
    case EventKind::vote_cast: return "vote_cast";
    case EventKind::board_view: return "board_view";
    case EventKind::login: return "login";
  }
  return "unknown";
}

EventKind parse_kind(std::string_view name) {
  for (EventKind k : kKinds) {
    if (kind_name(k) == name) {
      return k;
    }
  }
  throw Error(ErrorCode::UnknownKind, "unknown event kind '" + std::string(name) + "'");
}

const std::array<EventKind, kEventKindCount>& all_kinds() noexcept { return kKinds; }

std::vector<Session> sessionize(std::vector<Timestamp> times, Duration gap) {
  if (gap <= Duration::zero()) {
    throw Error(ErrorCode::InvalidArgument, "session gap must be positive");
  }
  std::sort(times.begin(), times.end());
  std::vector<Session> sessions;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (i == 0 || times[i] - times[i - 1] > gap) {
      sessions.push_back(Session{times[i], times[i], 0.0});
    } else {
      sessions.back().end = times[i];
    }
  }
  for (auto& s : sessions) {
    s.active_seconds = std::chrono::duration<double>(s.end - s.start).count();
  }
  return sessions;
}

std::uint64_t MetricsReport::total_events() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t bucket_hash(std::string_view salt, UserId user_id, std::string_view experiment_id) {
  std::uint64_t h = fnv1a64(salt);
  h = fnv1a64(kSeparator, h);
  h = fnv1a64(std::to_string(user_id.value), h);
  h = fnv1a64(kSeparator, h);
  return fnv1a64(experiment_id, h);
}

std::string pseudonymize(std::string_view salt, UserId user_id) {
  std::uint64_t h = fnv1a64(salt);
  h = fnv1a64(kSeparator, h);
  return to_hex64(fnv1a64(std::to_string(user_id.value), h));
}

void Experiments::define(std::vector<ExperimentDef> defs) {
  auto next = data_.definitions;
  for (auto& def : defs) {
    validate(def);
    for (const auto& [condition, count] : condition_counts(def.experiment_id)) {
      if (count > 0 &&
          std::find(def.conditions.begin(), def.conditions.end(), condition) == def.conditions.end()) {
        throw Error(ErrorCode::ConfigInvalid, "experiment '" + def.experiment_id +
                                                  "' would drop condition '" + condition +
                                                  "' which has assignees");
      }
    }
    const std::string id = def.experiment_id;
    next.insert_or_assign(id, std::move(def));
  }
  data_.definitions = std::move(next);
}

const ExperimentDef& Experiments::definition(std::string_view experiment_id) const {
  const auto it = data_.definitions.find(std::string(experiment_id));
  if (it == data_.definitions.end()) {
    throw Error(ErrorCode::UnknownExperiment,
                "unknown experiment '" + std::string(experiment_id) + "'");
  }
  return it->second;
}

std::map<std::string, std::uint64_t> Experiments::condition_counts(
    std::string_view experiment_id) const {
  std::map<std::string, std::uint64_t> counts;
  const std::string id(experiment_id);
  for (auto it = data_.assignments.lower_bound({id, UserId{0}});
       it != data_.assignments.end() && it->first.first == id; ++it) {
    ++counts[it->second.condition_id];
  }
  return counts;
}

const Assignment& Experiments::assign(UserId user_id, std::string_view experiment_id,
                                      Timestamp now) {
  const ExperimentDef& def = definition(experiment_id);
  const std::pair<std::string, UserId> key{def.experiment_id, user_id};
  if (auto it = data_.assignments.find(key); it != data_.assignments.end()) {
    return it->second;
  }
  std::string condition;
  if (def.strategy == Strategy::hash) {
    const auto h = bucket_hash(def.salt, user_id, def.experiment_id);
    condition = def.conditions[h % def.conditions.size()];
  } else {
    const auto counts = condition_counts(def.experiment_id);
    std::uint64_t fewest = UINT64_MAX;
    for (const auto& c : def.conditions) {
      const auto it = counts.find(c);
      const std::uint64_t n = it == counts.end() ? 0 : it->second;
      if (n < fewest) {
        fewest = n;
        condition = c;
      }
    }
  }
  return data_.assignments
      .emplace(key, Assignment{user_id, def.experiment_id, std::move(condition), now})
      .first->second;
}

const Assignment* Experiments::assignment(UserId user_id, std::string_view experiment_id) const {
  const auto it = data_.assignments.find({std::string(experiment_id), user_id});
  return it == data_.assignments.end() ? nullptr : &it->second;
}

const EngagementEvent& Experiments::log_event(UserId user_id, EventKind kind,
                                              std::optional<std::string> subject_id,
                                              Timestamp at) {
  const EventId id{data_.next_event_id};
  data_.events.push_back(EngagementEvent{id, user_id, kind, std::move(subject_id), at});
  ++data_.next_event_id;
  return data_.events.back();
}

std::vector<EngagementEvent> Experiments::events_for(UserId user_id) const {
  std::vector<EngagementEvent> out;
  for (const auto& e : data_.events) {
    if (e.user_id == user_id) {
      out.push_back(e);
    }
  }
  return out;
}

MetricsReport Experiments::compute_metrics(UserId user_id, const learning::Learning& learning,
                                           Duration gap) const {
  MetricsReport report;
  report.user_id = user_id;
  for (const auto& [key, a] : data_.assignments) {
    if (key.second == user_id) {
      report.conditions.emplace(a.experiment_id, a.condition_id);
    }
  }
  std::vector<Timestamp> times;
  for (const auto& e : data_.events) {
    if (e.user_id == user_id) {
      times.push_back(e.at);
      ++report.counts[static_cast<std::size_t>(e.kind)];
    }
  }
  const auto sessions = sessionize(std::move(times), gap);
  report.session_count = sessions.size();
  for (const auto& s : sessions) {
    report.total_active_seconds += s.active_seconds;
  }
  for (const auto& [topic_id, topic] : learning.topics()) {
    report.topics.emplace(topic_id, learning.progress_summary(user_id, topic_id));
  }
  return report;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') {
      out.push_back('"');
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::string Experiments::export_dataset(std::string_view experiment_id,
                                        const learning::Learning& learning,
                                        std::string_view pseudonym_salt, Duration gap) const {
  const ExperimentDef& def = definition(experiment_id);

  std::vector<std::string> header = {"user_pseudonym", "condition_id", "session_count",
                                     "total_active_seconds"};
  for (EventKind k : kKinds) {
    header.push_back("count_" + std::string(kind_name(k)));
  }
  for (const auto& [topic_id, topic] : learning.topics()) {
    header.push_back("fraction_viewed_" + topic_id);
    header.push_back("first_attempt_accuracy_" + topic_id);
  }

  std::string out;
  const auto write_row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out.push_back(',');
      out += csv_escape(cells[i]);
    }
    out += "\r\n";
  };
  write_row(header);

  for (auto it = data_.assignments.lower_bound({def.experiment_id, UserId{0}});
       it != data_.assignments.end() && it->first.first == def.experiment_id; ++it) {
    const Assignment& a = it->second;
    const MetricsReport report = compute_metrics(a.user_id, learning, gap);
    std::vector<std::string> row = {pseudonymize(pseudonym_salt, a.user_id), a.condition_id,
                                    std::to_string(report.session_count),
                                    format_number(report.total_active_seconds)};
    for (EventKind k : kKinds) {
      row.push_back(std::to_string(report.count(k)));
    }
    for (const auto& [topic_id, summary] : report.topics) {
      row.push_back(format_number(summary.fraction_viewed));
      row.push_back(summary.first_attempt_accuracy ? format_number(*summary.first_attempt_accuracy)
                                                   : std::string());
    }
    write_row(row);
  }
  return out;
}

}  // namespace gutinstinct::experiment

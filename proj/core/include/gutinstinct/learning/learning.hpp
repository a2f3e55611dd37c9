#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gutinstinct/common/ids.hpp"
#include "gutinstinct/common/time.hpp"

namespace gutinstinct::learning {

struct ContentSection {
  std::string section_id;
  std::string heading;
  std::string body;
  std::optional<std::string> media_url;

  friend bool operator==(const ContentSection&, const ContentSection&) = default;
};

/// Single-choice misconception check. The expert insight is the rapid
/// feedback shown after every answer.
struct QuizItem {
  std::string item_id;
  std::string prompt;
  std::vector<std::string> options;
  std::size_t correct_index{0};
  std::string expert_insight;

  friend bool operator==(const QuizItem&, const QuizItem&) = default;
};

struct Topic {
  TopicId topic_id;
  std::string title;
  std::vector<ContentSection> sections;
  std::vector<QuizItem> quiz;

  const ContentSection* find_section(std::string_view section_id) const;
  const QuizItem* find_item(std::string_view item_id) const;
  friend bool operator==(const Topic&, const Topic&) = default;
};

/// Throws Error{SeedParseError} describing the first broken invariant.
void validate_topic(const Topic& topic);

struct QuizAnswerRecord {
  std::size_t chosen_index{0};
  bool correct{false};
  Timestamp at;
  /// Correctness of the very first attempt; never rewritten.
  bool first_attempt_correct{false};

  friend bool operator==(const QuizAnswerRecord&, const QuizAnswerRecord&) = default;
};

struct ProgressRecord {
  UserId user_id;
  TopicId topic_id;
  std::set<std::string> viewed_sections;
  std::map<std::string, QuizAnswerRecord> quiz_answers;

  friend bool operator==(const ProgressRecord&, const ProgressRecord&) = default;
};

struct FeedbackResult {
  bool correct{false};
  std::string expert_insight;
};

struct ProgressSummary {
  double fraction_viewed{0.0};
  std::optional<double> first_attempt_accuracy;  // nullopt when nothing attempted

  friend bool operator==(const ProgressSummary&, const ProgressSummary&) = default;
};

using ProgressKey = std::pair<UserId, TopicId>;

class Learning {
 public:
  struct Data {
    std::map<TopicId, Topic> topics;
    std::map<ProgressKey, ProgressRecord> progress;

    friend bool operator==(const Data&, const Data&) = default;
  };

  Learning() = default;
  explicit Learning(Data data) : data_(std::move(data)) {}

  const Data& data() const noexcept { return data_; }

  /// Validates every topic first and rejects duplicate ids, then replaces the
  /// whole topic set in one step. Progress for sections that no longer exist
  /// is pruned.
  void install_topics(std::vector<Topic> topics);

  const Topic& get_topic(const TopicId& topic_id) const;
  bool has_topic(const TopicId& topic_id) const { return data_.topics.contains(topic_id); }
  const std::map<TopicId, Topic>& topics() const noexcept { return data_.topics; }

  const ProgressRecord& record_view(UserId user_id, const TopicId& topic_id,
                                    const std::string& section_id);

  FeedbackResult answer_quiz(UserId user_id, const TopicId& topic_id, const std::string& item_id,
                             std::size_t chosen_index, Timestamp now);

  ProgressSummary progress_summary(UserId user_id, const TopicId& topic_id) const;

  /// nullptr when the user has no activity on the topic.
  const ProgressRecord* progress(UserId user_id, const TopicId& topic_id) const;

  friend bool operator==(const Learning&, const Learning&) = default;

 private:
  ProgressRecord& progress_for(UserId user_id, const TopicId& topic_id);

  Data data_;
};

}  // namespace gutinstinct::learning

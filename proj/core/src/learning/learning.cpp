#include "gutinstinct/learning/learning.hpp"

#include <algorithm>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/common/strings.hpp"

namespace gutinstinct::learning {
namespace {

[[noreturn]] void seed_error(const Topic& topic, const std::string& what) {
  throw Error(ErrorCode::SeedParseError, "topic '" + topic.topic_id + "': " + what);
}

}  // namespace

const ContentSection* Topic::find_section(std::string_view section_id) const {
  const auto it = std::find_if(sections.begin(), sections.end(),
                               [&](const ContentSection& s) { return s.section_id == section_id; });
  return it == sections.end() ? nullptr : &*it;
}

const QuizItem* Topic::find_item(std::string_view item_id) const {
  const auto it = std::find_if(quiz.begin(), quiz.end(),
                               [&](const QuizItem& q) { return q.item_id == item_id; });
  return it == quiz.end() ? nullptr : &*it;
}

void validate_topic(const Topic& topic) {
  if (is_blank(topic.topic_id)) {
    throw Error(ErrorCode::SeedParseError, "topic_id must not be empty");
  }
  if (topic.sections.empty()) {
    seed_error(topic, "needs at least one section");
  }
  std::set<std::string> ids;
  for (const auto& s : topic.sections) {
    if (is_blank(s.section_id)) seed_error(topic, "section without section_id");
    if (!ids.insert(s.section_id).second) seed_error(topic, "duplicate section '" + s.section_id + "'");
    if (is_blank(s.body)) seed_error(topic, "section '" + s.section_id + "' has an empty body");
  }
  ids.clear();
  for (const auto& q : topic.quiz) {
    if (is_blank(q.item_id)) seed_error(topic, "quiz item without item_id");
    if (!ids.insert(q.item_id).second) seed_error(topic, "duplicate quiz item '" + q.item_id + "'");
    if (q.options.size() < 2) seed_error(topic, "quiz item '" + q.item_id + "' needs two options");
    if (q.correct_index >= q.options.size()) {
      seed_error(topic, "quiz item '" + q.item_id + "' correct_index out of range");
    }
    if (is_blank(q.expert_insight)) {
      seed_error(topic, "quiz item '" + q.item_id + "' has no expert insight");
    }
  }
}

void Learning::install_topics(std::vector<Topic> topics) {
  std::map<TopicId, Topic> next;
  for (auto& topic : topics) {
    validate_topic(topic);
    const TopicId id = topic.topic_id;
    if (!next.emplace(id, std::move(topic)).second) {
      throw Error(ErrorCode::SeedParseError, "duplicate topic_id '" + id + "'");
    }
  }
  data_.topics = std::move(next);

  for (auto it = data_.progress.begin(); it != data_.progress.end();) {
    const auto topic = data_.topics.find(it->first.second);
    if (topic == data_.topics.end()) {
      it = data_.progress.erase(it);
      continue;
    }
    auto& record = it->second;
    std::erase_if(record.viewed_sections,
                  [&](const std::string& s) { return topic->second.find_section(s) == nullptr; });
    std::erase_if(record.quiz_answers,
                  [&](const auto& kv) { return topic->second.find_item(kv.first) == nullptr; });
    ++it;
  }
}

const Topic& Learning::get_topic(const TopicId& topic_id) const {
  const auto it = data_.topics.find(topic_id);
  if (it == data_.topics.end()) {
    throw Error(ErrorCode::UnknownTopic, "unknown topic '" + topic_id + "'");
  }
  return it->second;
}

ProgressRecord& Learning::progress_for(UserId user_id, const TopicId& topic_id) {
  auto [it, inserted] = data_.progress.try_emplace(ProgressKey{user_id, topic_id});
  if (inserted) {
    it->second.user_id = user_id;
    it->second.topic_id = topic_id;
  }
  return it->second;
}

const ProgressRecord& Learning::record_view(UserId user_id, const TopicId& topic_id,
                                            const std::string& section_id) {
  const Topic& topic = get_topic(topic_id);
  if (topic.find_section(section_id) == nullptr) {
    throw Error(ErrorCode::UnknownSection,
                "section '" + section_id + "' is not part of topic '" + topic_id + "'");
  }
  ProgressRecord& record = progress_for(user_id, topic_id);
  record.viewed_sections.insert(section_id);
  return record;
}

FeedbackResult Learning::answer_quiz(UserId user_id, const TopicId& topic_id,
                                     const std::string& item_id, std::size_t chosen_index,
                                     Timestamp now) {
  const Topic& topic = get_topic(topic_id);
  const QuizItem* item = topic.find_item(item_id);
  if (item == nullptr) {
    throw Error(ErrorCode::UnknownItem, "unknown quiz item '" + item_id + "'");
  }
  if (chosen_index >= item->options.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "chosen option out of range");
  }
  const bool correct = chosen_index == item->correct_index;
  ProgressRecord& record = progress_for(user_id, topic_id);
  auto [it, first] = record.quiz_answers.try_emplace(item_id);
  it->second.chosen_index = chosen_index;
  it->second.correct = correct;
  it->second.at = now;
  if (first) {
    it->second.first_attempt_correct = correct;
  }
  return FeedbackResult{correct, item->expert_insight};
}

ProgressSummary Learning::progress_summary(UserId user_id, const TopicId& topic_id) const {
  const Topic& topic = get_topic(topic_id);
  const ProgressRecord* record = progress(user_id, topic_id);
  ProgressSummary summary;
  if (record == nullptr) {
    return summary;
  }
  const auto viewed = std::count_if(topic.sections.begin(), topic.sections.end(),
                                    [&](const ContentSection& s) {
                                      return record->viewed_sections.contains(s.section_id);
                                    });
  summary.fraction_viewed =
      static_cast<double>(viewed) / static_cast<double>(topic.sections.size());
  if (!record->quiz_answers.empty()) {
    const auto first_correct =
        std::count_if(record->quiz_answers.begin(), record->quiz_answers.end(),
                      [](const auto& kv) { return kv.second.first_attempt_correct; });
    summary.first_attempt_accuracy = static_cast<double>(first_correct) /
                                     static_cast<double>(record->quiz_answers.size());
  }
  return summary;
}

const ProgressRecord* Learning::progress(UserId user_id, const TopicId& topic_id) const {
  const auto it = data_.progress.find(ProgressKey{user_id, topic_id});
  return it == data_.progress.end() ? nullptr : &it->second;
}

}  // namespace gutinstinct::learning

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gutinstinct/board/types.hpp"

namespace gutinstinct::board {

/// Picks a topic for a question's tags (in submission order). Called once
/// all validation has passed, with the id the question will be stored under.
using TopicResolver = std::function<std::optional<TopicId>(
    std::span<const Tag> tags, const std::string& level1_text, QuestionId question_id)>;

struct QuestionFilter {
  std::optional<TopicId> topic_id;
  std::optional<std::string> tag;  // matched against canonical tags
  std::optional<UserId> author_id;
  bool include_hidden{false};
};

enum class SortOrder { newest, top };

/// The Gutboard: users, questions and everything attached to them.
///
/// Every mutating member validates fully before touching state, so a thrown
/// Error leaves the board unchanged.
class Board {
 public:
  struct Data {
    std::map<UserId, UserAccount> users;
    std::map<QuestionId, Question> questions;
    std::map<ResponseKey, Level1Response> level1;
    std::vector<Level2Response> level2;
    std::map<CommentId, Comment> comments;
    std::map<ResponseKey, Vote> votes;
    std::uint64_t next_user_id{1};
    std::uint64_t next_question_id{1};
    std::uint64_t next_comment_id{1};

    friend bool operator==(const Data&, const Data&) = default;
  };

  Board() = default;
  explicit Board(Data data) : data_(std::move(data)) {}

  const Data& data() const noexcept { return data_; }

  // Users
  const UserAccount& register_user(std::string display_name, Role role, Timestamp now);
  const UserAccount& user(UserId id) const;
  bool has_user(UserId id) const { return data_.users.contains(id); }

  // Questions
  const Question& create_question(UserId author_id, std::string level1_text,
                                  std::string level2_text, std::span<const std::string> raw_tags,
                                  Timestamp now, const TopicResolver& resolve);

  /// Absent optionals leave the field alone. Tags are re-routed only when the
  /// new canonical tag list differs from the current one.
  const Question& edit_question(UserId editor_id, QuestionId question_id,
                                std::optional<std::string> new_level1,
                                std::optional<std::string> new_level2,
                                std::optional<std::vector<std::string>> new_tags, Timestamp now,
                                const TopicResolver& resolve);

  /// Soft delete (moderator only). The record and its history stay.
  const Question& hide_question(UserId moderator_id, QuestionId question_id, bool hidden);

  const Question& question(QuestionId id) const;
  void set_topic(QuestionId id, std::optional<TopicId> topic_id);

  std::vector<Question> list_questions(const QuestionFilter& filter, SortOrder sort) const;

  // Progressive disclosure
  const Level1Response& answer_level1(UserId user_id, QuestionId question_id, Level1Answer answer,
                                      Timestamp now);
  const Level2Response& answer_level2(UserId user_id, QuestionId question_id, std::string body,
                                      Timestamp now);
  const Level1Response* level1_response(QuestionId question_id, UserId user_id) const;
  std::vector<Level2Response> level2_responses(QuestionId question_id) const;

  // Discussion and ranking
  const Comment& add_comment(UserId user_id, QuestionId question_id, std::string body,
                             std::optional<CommentId> parent_comment_id, Timestamp now);
  std::vector<Comment> comments(QuestionId question_id) const;

  /// Same direction twice toggles the vote off; the opposite direction
  /// replaces it. Returns the question's new score.
  std::int64_t cast_vote(UserId user_id, QuestionId question_id, VoteDirection direction);

  /// Score recomputed from the vote records alone.
  std::int64_t tally_score(QuestionId question_id) const;

  friend bool operator==(const Board&, const Board&) = default;

 private:
  Question& visible_question(QuestionId id);
  std::vector<Tag> make_tags(std::span<const std::string> raw_tags) const;

  Data data_;
};

}  // namespace gutinstinct::board

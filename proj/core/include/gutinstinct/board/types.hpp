#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gutinstinct/common/ids.hpp"
#include "gutinstinct/common/time.hpp"

namespace gutinstinct::board {

enum class Role { participant, moderator };

struct UserAccount {
  UserId user_id;
  std::string display_name;
  Role role{Role::participant};
  Timestamp created_at;

  bool is_moderator() const noexcept { return role == Role::moderator; }
  friend bool operator==(const UserAccount&, const UserAccount&) = default;
};

/// A user-entered tag. `canonical` is always router::normalize(raw).
struct Tag {
  std::string raw;
  std::string canonical;

  friend bool operator==(const Tag&, const Tag&) = default;
};

struct EditRecord {
  Timestamp at;
  UserId editor_id;

  friend bool operator==(const EditRecord&, const EditRecord&) = default;
};

/// Three-level hypothesis question: a yes/no audience filter, a detail
/// prompt for those who qualify, and an open discussion thread.
struct Question {
  QuestionId question_id;
  UserId author_id;
  std::string level1_text;
  std::string level2_text;
  std::vector<Tag> tags;
  std::optional<TopicId> topic_id;
  std::int64_t score{0};
  Timestamp created_at;
  Timestamp edited_at;
  std::vector<EditRecord> edit_history;
  bool hidden{false};

  friend bool operator==(const Question&, const Question&) = default;
};

enum class Level1Answer { yes, no };

struct Level1Response {
  QuestionId question_id;
  UserId user_id;
  Level1Answer answer{Level1Answer::no};
  // Time the current answer value was first given.
  Timestamp at;

  bool qualifies() const noexcept { return answer == Level1Answer::yes; }
  friend bool operator==(const Level1Response&, const Level1Response&) = default;
};

struct Level2Response {
  QuestionId question_id;
  UserId user_id;
  std::string body;
  Timestamp at;

  friend bool operator==(const Level2Response&, const Level2Response&) = default;
};

struct Comment {
  CommentId comment_id;
  QuestionId question_id;
  UserId user_id;
  std::string body;
  std::optional<CommentId> parent_comment_id;
  Timestamp at;

  friend bool operator==(const Comment&, const Comment&) = default;
};

enum class VoteDirection { up, down };

struct Vote {
  QuestionId question_id;
  UserId user_id;
  VoteDirection direction{VoteDirection::up};

  friend bool operator==(const Vote&, const Vote&) = default;
};

using ResponseKey = std::pair<QuestionId, UserId>;

}  // namespace gutinstinct::board

#include "gutinstinct/board/board.hpp"

#include <algorithm>
#include <set>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/common/strings.hpp"
#include "gutinstinct/router/text.hpp"

namespace gutinstinct::board {

namespace {

void require_text(std::string_view text, std::string_view what) {
  if (is_blank(text)) {
    throw Error(ErrorCode::EmptyText, std::string(what) + " must not be empty");
  }
}

bool canonical_equal(const std::vector<Tag>& a, const std::vector<Tag>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Tag& x, const Tag& y) { return x.canonical == y.canonical; });
}

}  // namespace

const UserAccount& Board::register_user(std::string display_name, Role role, Timestamp now) {
  require_text(display_name, "display name");
  const UserId id{data_.next_user_id};
  auto [it, inserted] =
      data_.users.emplace(id, UserAccount{id, std::move(display_name), role, now});
  if (!inserted) {
    throw Error(ErrorCode::DuplicateId, "user id already taken");
  }
  ++data_.next_user_id;
  return it->second;
}

const UserAccount& Board::user(UserId id) const {
  const auto it = data_.users.find(id);
  if (it == data_.users.end()) {
    throw Error(ErrorCode::UnknownUser, "unknown user " + to_string(id));
  }
  return it->second;
}

std::vector<Tag> Board::make_tags(std::span<const std::string> raw_tags) const {
  std::vector<Tag> tags;
  std::set<std::string> seen;
  for (const auto& raw : raw_tags) {
    std::string canonical = router::normalize(raw);
    if (canonical.empty() || !seen.insert(canonical).second) {
      continue;
    }
    tags.push_back(Tag{raw, std::move(canonical)});
  }
  if (tags.empty()) {
    throw Error(ErrorCode::NoTags, "a question needs at least one non-empty tag");
  }
  return tags;
}

const Question& Board::create_question(UserId author_id, std::string level1_text,
                                       std::string level2_text,
                                       std::span<const std::string> raw_tags, Timestamp now,
                                       const TopicResolver& resolve) {
  user(author_id);
  require_text(level1_text, "level 1 text");
  require_text(level2_text, "level 2 text");
  std::vector<Tag> tags = make_tags(raw_tags);

  const QuestionId id{data_.next_question_id};
  Question q;
  q.question_id = id;
  q.author_id = author_id;
  q.level1_text = std::move(level1_text);
  q.level2_text = std::move(level2_text);
  q.tags = std::move(tags);
  q.created_at = now;
  q.edited_at = now;
  if (resolve) {
    q.topic_id = resolve(q.tags, q.level1_text, id);
  }
  ++data_.next_question_id;
  return data_.questions.emplace(id, std::move(q)).first->second;
}

Question& Board::visible_question(QuestionId id) {
  const auto it = data_.questions.find(id);
  if (it == data_.questions.end() || it->second.hidden) {
    throw Error(ErrorCode::UnknownQuestion, "unknown question " + to_string(id));
  }
  return it->second;
}

const Question& Board::question(QuestionId id) const {
  const auto it = data_.questions.find(id);
  if (it == data_.questions.end()) {
    throw Error(ErrorCode::UnknownQuestion, "unknown question " + to_string(id));
  }
  return it->second;
}

const Question& Board::edit_question(UserId editor_id, QuestionId question_id,
                                     std::optional<std::string> new_level1,
                                     std::optional<std::string> new_level2,
                                     std::optional<std::vector<std::string>> new_tags,
                                     Timestamp now, const TopicResolver& resolve) {
  const UserAccount& editor = user(editor_id);
  Question& q = visible_question(question_id);
  if (q.author_id != editor_id && !editor.is_moderator()) {
    throw Error(ErrorCode::NotAuthorized, "only the author or a moderator may edit a question");
  }
  if (new_level1) {
    require_text(*new_level1, "level 1 text");
  }
  if (new_level2) {
    require_text(*new_level2, "level 2 text");
  }
  std::optional<std::vector<Tag>> tags;
  if (new_tags) {
    tags = make_tags(*new_tags);
  }

  if (new_level1) {
    q.level1_text = std::move(*new_level1);
  }
  if (new_level2) {
    q.level2_text = std::move(*new_level2);
  }
  if (tags) {
    const bool changed = !canonical_equal(*tags, q.tags);
    q.tags = std::move(*tags);
    if (changed && resolve) {
      q.topic_id = resolve(q.tags, q.level1_text, q.question_id);
    }
  }
  q.edited_at = std::max(now, q.created_at);
  q.edit_history.push_back(EditRecord{q.edited_at, editor_id});
  return q;
}

const Question& Board::hide_question(UserId moderator_id, QuestionId question_id, bool hidden) {
  if (!user(moderator_id).is_moderator()) {
    throw Error(ErrorCode::NotAuthorized, "only moderators may hide questions");
  }
  const auto it = data_.questions.find(question_id);
  if (it == data_.questions.end()) {
    throw Error(ErrorCode::UnknownQuestion, "unknown question " + to_string(question_id));
  }
  it->second.hidden = hidden;
  return it->second;
}

void Board::set_topic(QuestionId id, std::optional<TopicId> topic_id) {
  const auto it = data_.questions.find(id);
  if (it == data_.questions.end()) {
    throw Error(ErrorCode::UnknownQuestion, "unknown question " + to_string(id));
  }
  it->second.topic_id = std::move(topic_id);
}

std::vector<Question> Board::list_questions(const QuestionFilter& filter, SortOrder sort) const {
  std::optional<std::string> tag;
  if (filter.tag) {
    tag = router::normalize(*filter.tag);
  }
  std::vector<Question> out;
  for (const auto& [id, q] : data_.questions) {
    if (q.hidden && !filter.include_hidden) {
      continue;
    }
    if (filter.topic_id && q.topic_id != filter.topic_id) {
      continue;
    }
    if (filter.author_id && q.author_id != *filter.author_id) {
      continue;
    }
    if (tag && std::none_of(q.tags.begin(), q.tags.end(),
                            [&](const Tag& t) { return t.canonical == *tag; })) {
      continue;
    }
    out.push_back(q);
  }
  if (sort == SortOrder::newest) {
    std::sort(out.begin(), out.end(), [](const Question& a, const Question& b) {
      if (a.created_at != b.created_at) return a.created_at > b.created_at;
      return a.question_id < b.question_id;
    });
  } else {
    std::sort(out.begin(), out.end(), [](const Question& a, const Question& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.created_at != b.created_at) return a.created_at > b.created_at;
      return a.question_id < b.question_id;
    });
  }
  return out;
}

const Level1Response& Board::answer_level1(UserId user_id, QuestionId question_id,
                                           Level1Answer answer, Timestamp now) {
  user(user_id);
  visible_question(question_id);
  const ResponseKey key{question_id, user_id};
  auto it = data_.level1.find(key);
  if (it == data_.level1.end()) {
    return data_.level1.emplace(key, Level1Response{question_id, user_id, answer, now})
        .first->second;
  }
  Level1Response& current = it->second;
  if (current.answer == answer) {
    return current;
  }
  // A "yes" backs every level-2 contribution already made; it cannot be
  // withdrawn once there is one.
  if (current.qualifies()) {
    const bool contributed =
        std::any_of(data_.level2.begin(), data_.level2.end(), [&](const Level2Response& r) {
          return r.question_id == question_id && r.user_id == user_id;
        });
    if (contributed) {
      throw Error(ErrorCode::AnswerLocked,
                  "level 1 answer is locked after contributing a level 2 response");
    }
  }
  current.answer = answer;
  current.at = now;
  return current;
}

const Level2Response& Board::answer_level2(UserId user_id, QuestionId question_id,
                                           std::string body, Timestamp now) {
  user(user_id);
  visible_question(question_id);
  const auto it = data_.level1.find(ResponseKey{question_id, user_id});
  if (it == data_.level1.end() || !it->second.qualifies()) {
    throw Error(ErrorCode::NotQualified,
                "a 'yes' level 1 answer is required before answering level 2");
  }
  require_text(body, "level 2 response");
  data_.level2.push_back(
      Level2Response{question_id, user_id, std::move(body), std::max(now, it->second.at)});
  return data_.level2.back();
}

const Level1Response* Board::level1_response(QuestionId question_id, UserId user_id) const {
  const auto it = data_.level1.find(ResponseKey{question_id, user_id});
  return it == data_.level1.end() ? nullptr : &it->second;
}

std::vector<Level2Response> Board::level2_responses(QuestionId question_id) const {
  std::vector<Level2Response> out;
  for (const auto& r : data_.level2) {
    if (r.question_id == question_id) {
      out.push_back(r);
    }
  }
  return out;
}

const Comment& Board::add_comment(UserId user_id, QuestionId question_id, std::string body,
                                  std::optional<CommentId> parent_comment_id, Timestamp now) {
  user(user_id);
  visible_question(question_id);
  if (parent_comment_id) {
    const auto parent = data_.comments.find(*parent_comment_id);
    if (parent == data_.comments.end()) {
      throw Error(ErrorCode::UnknownParent, "unknown parent comment " + to_string(*parent_comment_id));
    }
    if (parent->second.question_id != question_id) {
      throw Error(ErrorCode::CrossQuestionParent, "parent comment belongs to another question");
    }
  }
  require_text(body, "comment");
  const CommentId id{data_.next_comment_id};
  ++data_.next_comment_id;
  return data_.comments
      .emplace(id, Comment{id, question_id, user_id, std::move(body), parent_comment_id, now})
      .first->second;
}

std::vector<Comment> Board::comments(QuestionId question_id) const {
  std::vector<Comment> out;
  for (const auto& [id, c] : data_.comments) {
    if (c.question_id == question_id) {
      out.push_back(c);
    }
  }
  return out;
}

std::int64_t Board::cast_vote(UserId user_id, QuestionId question_id, VoteDirection direction) {
  user(user_id);
  Question& q = visible_question(question_id);
  const auto delta = [](VoteDirection d) -> std::int64_t {
    return d == VoteDirection::up ? 1 : -1;
  };
  const ResponseKey key{question_id, user_id};
  auto it = data_.votes.find(key);
  if (it == data_.votes.end()) {
    data_.votes.emplace(key, Vote{question_id, user_id, direction});
    q.score += delta(direction);
  } else if (it->second.direction == direction) {
    q.score -= delta(direction);
    data_.votes.erase(it);
  } else {
    q.score += delta(direction) - delta(it->second.direction);
    it->second.direction = direction;
  }
  return q.score;
}

std::int64_t Board::tally_score(QuestionId question_id) const {
  std::int64_t score = 0;
  for (const auto& [key, vote] : data_.votes) {
    if (key.first == question_id) {
      score += vote.direction == VoteDirection::up ? 1 : -1;
    }
  }
  return score;
}

}  // namespace gutinstinct::board

#include "gutinstinct/service/platform.hpp"

#include <algorithm>
#include <set>
#include <type_traits>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/router/text.hpp"

namespace gutinstinct::service {

using experiment::EventKind;

namespace {

struct NoCommit {
  void operator()() const noexcept {}
};

std::shared_ptr<const router::TopicVectorModel> try_build(const router::Corpora& corpora,
                                                         Timestamp now) {
  try {
    return std::make_shared<const router::TopicVectorModel>(router::build_model(corpora, now));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyCorpus) {
      return nullptr;
    }
    throw;
  }
}

void require_user(const State& s, UserId id) {
  if (!s.board.has_user(id)) {
    throw Error(ErrorCode::UnknownUser, "unknown user " + to_string(id));
  }
}

// Gives every topic-less question accepted by `select` the topic of its first
// resolving tag. No queue bookkeeping.
template <typename Select>
std::size_t reroute_unrouted_questions(State& s, const router::ClassifierContext& ctx,
                                       Select select) {
  std::vector<std::pair<QuestionId, TopicId>> reroutes;
  for (const auto& [id, q] : s.board.data().questions) {
    if (q.topic_id || !select(q)) continue;
    for (const auto& t : q.tags) {
      const auto result = s.router.resolve(t.raw, q.level1_text, ctx);
      if (result.match) {
        reroutes.emplace_back(id, result.match->topic_id);
        break;
      }
    }
  }
  for (auto& [id, topic] : reroutes) {
    s.board.set_topic(id, std::move(topic));
  }
  return reroutes.size();
}

}  // namespace

Platform::Platform(State initial, std::shared_ptr<const Clock> clock, PlatformOptions options,
                   std::shared_ptr<SnapshotStore> store)
    : state_(std::move(initial)),
      clock_(std::move(clock)),
      options_(std::move(options)),
      store_(std::move(store)) {
  if (!clock_) {
    clock_ = std::make_shared<SystemClock>();
  }
  if (!(options_.router_threshold > 0.0 && options_.router_threshold < 1.0)) {
    throw Error(ErrorCode::ConfigInvalid, "router threshold must lie in (0, 1)");
  }
  if (options_.session_gap <= Duration::zero()) {
    throw Error(ErrorCode::ConfigInvalid, "session gap must be positive");
  }
  model_ = try_build(state_.router.corpora(), clock_->now());
}

template <typename F, typename Commit>
auto Platform::transact(F&& f, Commit&& commit) {
  std::unique_lock lock(mutex_);
  using Result = std::invoke_result_t<F&, State&>;
  if (!store_) {
    if constexpr (std::is_void_v<Result>) {
      f(state_);
      commit();
      return;
    } else {
      Result result = f(state_);
      commit();
      return result;
    }
  }
  State backup = state_;
  try {
    if constexpr (std::is_void_v<Result>) {
      f(state_);
      store_->save(state_);
      commit();
      return;
    } else {
      Result result = f(state_);
      store_->save(state_);
      commit();
      return result;
    }
  } catch (...) {
    state_ = std::move(backup);
    throw;
  }
}

template <typename F>
auto Platform::transact(F&& f) {
  return transact(std::forward<F>(f), NoCommit{});
}

State Platform::snapshot() const {
  std::shared_lock lock(mutex_);
  return state_;
}

void Platform::rebuild_model() {
  std::unique_lock lock(mutex_);
  model_ = try_build(state_.router.corpora(), clock_->now());
}

std::shared_ptr<const router::TopicVectorModel> Platform::model() const {
  std::shared_lock lock(mutex_);
  return model_;
}

// ---- accounts --------------------------------------------------------------

board::UserAccount Platform::register_user(std::string display_name, board::Role role,
                                           std::string password_hash) {
  return transact([&](State& s) {
    board::UserAccount user = s.board.register_user(std::move(display_name), role, clock_->now());
    if (!password_hash.empty()) {
      s.password_hashes.insert_or_assign(user.user_id, std::move(password_hash));
    }
    return user;
  });
}

board::UserAccount Platform::user(UserId id) const {
  return read([&](const State& s) { return s.board.user(id); });
}

std::optional<std::string> Platform::password_hash(UserId id) const {
  return read([&](const State& s) -> std::optional<std::string> {
    const auto it = s.password_hashes.find(id);
    if (it == s.password_hashes.end()) return std::nullopt;
    return it->second;
  });
}

// ---- board -----------------------------------------------------------------

board::Question Platform::create_question(UserId author, std::string level1_text,
                                          std::string level2_text, std::vector<std::string> tags) {
  return transact([&](State& s) {
    const Timestamp now = clock_->now();
    const auto ctx = classifier();
    // Every tag is routed so unmapped ones reach the curation queue; the
    // first one that resolves supplies the topic.
    auto resolver = [&](std::span<const board::Tag> qtags, const std::string& context,
                        QuestionId id) -> std::optional<TopicId> {
      std::optional<TopicId> topic;
      for (const auto& tag : qtags) {
        auto result = s.router.route(tag.raw, context, id, now, ctx);
        if (!topic && result.match) {
          topic = result.match->topic_id;
        }
      }
      return topic;
    };
    board::Question q = s.board.create_question(author, std::move(level1_text),
                                                std::move(level2_text), tags, now, resolver);
    s.experiments.log_event(author, EventKind::question_created, to_string(q.question_id), now);
    return q;
  });
}

board::Question Platform::edit_question(UserId editor, QuestionId id,
                                        std::optional<std::string> level1,
                                        std::optional<std::string> level2,
                                        std::optional<std::vector<std::string>> tags) {
  return transact([&](State& s) {
    const Timestamp now = clock_->now();
    const auto ctx = classifier();
    std::set<std::string> previous;
    if (const auto it = s.board.data().questions.find(id); it != s.board.data().questions.end()) {
      for (const auto& t : it->second.tags) previous.insert(t.canonical);
    }
    auto resolver = [&](std::span<const board::Tag> qtags, const std::string& context,
                        QuestionId qid) -> std::optional<TopicId> {
      std::optional<TopicId> topic;
      for (const auto& tag : qtags) {
        const bool is_new = !previous.contains(tag.canonical);
        auto result = s.router.route(tag.raw, context, qid, now, ctx, is_new);
        if (!topic && result.match) {
          topic = result.match->topic_id;
        }
      }
      return topic;
    };
    board::Question q = s.board.edit_question(editor, id, std::move(level1), std::move(level2),
                                              std::move(tags), now, resolver);
    s.experiments.log_event(editor, EventKind::question_edited, to_string(id), now);
    return q;
  });
}

board::Question Platform::hide_question(UserId moderator, QuestionId id, bool hidden) {
  return transact([&](State& s) { return s.board.hide_question(moderator, id, hidden); });
}

board::Question Platform::question(QuestionId id) const {
  return read([&](const State& s) { return s.board.question(id); });
}

std::vector<board::Question> Platform::list_questions(const board::QuestionFilter& filter,
                                                      board::SortOrder sort) const {
  return read([&](const State& s) { return s.board.list_questions(filter, sort); });
}

board::Level1Response Platform::answer_level1(UserId user, QuestionId id,
                                              board::Level1Answer answer) {
  return transact([&](State& s) {
    const Timestamp now = clock_->now();
    board::Level1Response r = s.board.answer_level1(user, id, answer, now);
    s.experiments.log_event(user, EventKind::level1_answered, to_string(id), now);
    return r;
  });
}

board::Level2Response Platform::answer_level2(UserId user, QuestionId id, std::string body) {
  return transact([&](State& s) {
    const Timestamp now = clock_->now();
    board::Level2Response r = s.board.answer_level2(user, id, std::move(body), now);
    s.experiments.log_event(user, EventKind::level2_answered, to_string(id), now);
    return r;
  });
}

board::Comment Platform::add_comment(UserId user, QuestionId id, std::string body,
                                     std::optional<CommentId> parent) {
  return transact([&](State& s) {
    const Timestamp now = clock_->now();
    board::Comment c = s.board.add_comment(user, id, std::move(body), parent, now);
    s.experiments.log_event(user, EventKind::comment_added, to_string(id), now);
    return c;
  });
}

std::int64_t Platform::cast_vote(UserId user, QuestionId id, board::VoteDirection direction) {
  return transact([&](State& s) {
    const Timestamp now = clock_->now();
    const std::int64_t score = s.board.cast_vote(user, id, direction);
    s.experiments.log_event(user, EventKind::vote_cast, to_string(id), now);
    return score;
  });
}

// ---- tag routing -----------------------------------------------------------

router::RoutingResult Platform::preview_route(const std::string& tag,
                                              const std::string& context) const {
  std::shared_lock lock(mutex_);
  return state_.router.resolve(tag, context, classifier());
}

void Platform::seed_mappings(const std::vector<std::pair<std::string, TopicId>>& entries) {
  transact([&](State& s) {
    for (const auto& [tag, topic] : entries) {
      if (!s.learning.has_topic(topic)) {
        throw Error(ErrorCode::UnknownTopic, "mapping '" + tag + "' names unknown topic '" + topic + "'");
      }
    }
    s.router.seed_mappings(entries, clock_->now());
  });
}

router::ManualMapping Platform::approve_mapping(UserId curator, const std::string& tag,
                                                const TopicId& topic_id) {
  return transact([&](State& s) {
    const Timestamp now = clock_->now();
    const board::UserAccount& user = s.board.user(curator);
    router::ManualMapping mapping =
        s.router.approve_mapping(user, tag, topic_id, s.learning.has_topic(topic_id), now);

    const std::string canonical = router::normalize(tag);
    reroute_unrouted_questions(s, classifier(), [&](const board::Question& q) {
      return std::any_of(q.tags.begin(), q.tags.end(),
                         [&](const board::Tag& t) { return t.canonical == canonical; });
    });
    return mapping;
  });
}

std::vector<router::UnmappedQueueEntry> Platform::unmapped() const {
  return read([](const State& s) {
    std::vector<router::UnmappedQueueEntry> out;
    for (const auto& [tag, entry] : s.router.unmapped_queue()) out.push_back(entry);
    return out;
  });
}

std::size_t Platform::reroute_unrouted() {
  return transact([&](State& s) {
    return reroute_unrouted_questions(s, classifier(), [](const board::Question&) { return true; });
  });
}

// ---- learning --------------------------------------------------------------

void Platform::install_topics(std::vector<learning::Topic> topics, router::Corpora corpora) {
  for (const auto& [topic_id, docs] : corpora) {
    const bool known = std::any_of(topics.begin(), topics.end(),
                                   [&](const learning::Topic& t) { return t.topic_id == topic_id; });
    if (!known) {
      throw Error(ErrorCode::SeedParseError, "corpus for unknown topic '" + topic_id + "'");
    }
  }
  std::shared_ptr<const router::TopicVectorModel> next_model;
  transact(
      [&](State& s) {
        s.learning.install_topics(std::move(topics));
        s.router.set_corpora(std::move(corpora));
        next_model = try_build(s.router.corpora(), clock_->now());
      },
      [&] { model_ = std::move(next_model); });
}

learning::Topic Platform::topic(const TopicId& id) const {
  return read([&](const State& s) { return s.learning.get_topic(id); });
}

std::vector<learning::Topic> Platform::topics() const {
  return read([](const State& s) {
    std::vector<learning::Topic> out;
    for (const auto& [id, t] : s.learning.topics()) out.push_back(t);
    return out;
  });
}

learning::ProgressRecord Platform::record_view(UserId user, const TopicId& topic,
                                               const std::string& section_id) {
  return transact([&](State& s) {
    require_user(s, user);
    learning::ProgressRecord record = s.learning.record_view(user, topic, section_id);
    s.experiments.log_event(user, EventKind::section_view, section_id, clock_->now());
    return record;
  });
}

learning::FeedbackResult Platform::answer_quiz(UserId user, const TopicId& topic,
                                               const std::string& item, std::size_t chosen_index) {
  return transact([&](State& s) {
    require_user(s, user);
    const Timestamp now = clock_->now();
    learning::FeedbackResult feedback = s.learning.answer_quiz(user, topic, item, chosen_index, now);
    s.experiments.log_event(user, EventKind::quiz_answer, item, now);
    return feedback;
  });
}

learning::ProgressSummary Platform::progress_summary(UserId user, const TopicId& topic) const {
  return read([&](const State& s) {
    require_user(s, user);
    return s.learning.progress_summary(user, topic);
  });
}

// ---- experiments -----------------------------------------------------------

void Platform::define_experiments(std::vector<experiment::ExperimentDef> defs) {
  transact([&](State& s) { s.experiments.define(std::move(defs)); });
}

experiment::Assignment Platform::assign(UserId user, const std::string& experiment_id) {
  {
    // Fast path: an existing assignment needs no write.
    std::shared_lock lock(mutex_);
    require_user(state_, user);
    if (const auto* a = state_.experiments.assignment(user, experiment_id)) {
      return *a;
    }
  }
  return transact([&](State& s) {
    require_user(s, user);
    return s.experiments.assign(user, experiment_id, clock_->now());
  });
}

experiment::EngagementEvent Platform::log_event(UserId user, EventKind kind,
                                                std::optional<std::string> subject_id,
                                                std::optional<Timestamp> at) {
  return transact([&](State& s) {
    require_user(s, user);
    return s.experiments.log_event(user, kind, std::move(subject_id), at.value_or(clock_->now()));
  });
}

experiment::MetricsReport Platform::compute_metrics(UserId user) const {
  return read([&](const State& s) {
    require_user(s, user);
    return s.experiments.compute_metrics(user, s.learning, options_.session_gap);
  });
}

std::string Platform::export_dataset(const std::string& experiment_id) const {
  return read([&](const State& s) {
    return s.experiments.export_dataset(experiment_id, s.learning, options_.pseudonym_salt,
                                        options_.session_gap);
  });
}

}  // namespace gutinstinct::service

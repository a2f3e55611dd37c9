#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "gutinstinct/common/time.hpp"
#include "gutinstinct/service/snapshot_store.hpp"
#include "gutinstinct/service/state.hpp"

namespace gutinstinct::service {

struct PlatformOptions {
  double router_threshold{router::kDefaultThreshold};
  Duration session_gap{experiment::kDefaultSessionGap};
  std::string pseudonym_salt{"gutinstinct-export"};
};

/// Transactional facade over every module.
///
/// Reads take a shared lock; each mutating call takes the writer lock, runs
/// to completion, and (when a SnapshotStore is attached) is committed by a
/// successful save. A failed save restores the pre-call state. Results are
/// returned by value so nothing escapes the lock.
class Platform {
 public:
  Platform(State initial, std::shared_ptr<const Clock> clock, PlatformOptions options = {},
           std::shared_ptr<SnapshotStore> store = nullptr);

  const PlatformOptions& options() const noexcept { return options_; }
  const Clock& clock() const noexcept { return *clock_; }
  std::shared_ptr<const Clock> shared_clock() const noexcept { return clock_; }

  State snapshot() const;

  template <typename F>
  decltype(auto) read(F&& f) const {
    std::shared_lock lock(mutex_);
    return std::forward<F>(f)(state_);
  }

  // ---- topic model -------------------------------------------------------
  /// Rebuilds from the stored corpora. With no usable corpus the model is
  /// cleared and routing falls back to the manual table only.
  void rebuild_model();
  std::shared_ptr<const router::TopicVectorModel> model() const;

  // ---- accounts ----------------------------------------------------------
  board::UserAccount register_user(std::string display_name, board::Role role,
                                   std::string password_hash = {});
  board::UserAccount user(UserId id) const;
  std::optional<std::string> password_hash(UserId id) const;

  // ---- board -------------------------------------------------------------
  board::Question create_question(UserId author, std::string level1_text, std::string level2_text,
                                  std::vector<std::string> tags);
  board::Question edit_question(UserId editor, QuestionId id, std::optional<std::string> level1,
                                std::optional<std::string> level2,
                                std::optional<std::vector<std::string>> tags);
  board::Question hide_question(UserId moderator, QuestionId id, bool hidden);
  board::Question question(QuestionId id) const;
  std::vector<board::Question> list_questions(const board::QuestionFilter& filter,
                                              board::SortOrder sort) const;
  board::Level1Response answer_level1(UserId user, QuestionId id, board::Level1Answer answer);
  board::Level2Response answer_level2(UserId user, QuestionId id, std::string body);
  board::Comment add_comment(UserId user, QuestionId id, std::string body,
                             std::optional<CommentId> parent);
  std::int64_t cast_vote(UserId user, QuestionId id, board::VoteDirection direction);

  // ---- tag routing -------------------------------------------------------
  /// Side-effect free routing, e.g. for a live preview while composing.
  router::RoutingResult preview_route(const std::string& tag, const std::string& context) const;
  void seed_mappings(const std::vector<std::pair<std::string, TopicId>>& entries);
  /// Approves the mapping and re-routes every unrouted question bearing the tag.
  router::ManualMapping approve_mapping(UserId curator, const std::string& tag,
                                        const TopicId& topic_id);
  std::vector<router::UnmappedQueueEntry> unmapped() const;
  /// Re-runs routing (without queue bookkeeping) for questions that have no
  /// topic, e.g. after a model rebuild. Returns how many gained a topic.
  std::size_t reroute_unrouted();

  // ---- learning ----------------------------------------------------------
  /// Replaces topics and corpora together, then rebuilds the model.
  void install_topics(std::vector<learning::Topic> topics, router::Corpora corpora);
  learning::Topic topic(const TopicId& id) const;
  std::vector<learning::Topic> topics() const;
  learning::ProgressRecord record_view(UserId user, const TopicId& topic,
                                       const std::string& section_id);
  learning::FeedbackResult answer_quiz(UserId user, const TopicId& topic, const std::string& item,
                                       std::size_t chosen_index);
  learning::ProgressSummary progress_summary(UserId user, const TopicId& topic) const;

  // ---- experiments -------------------------------------------------------
  void define_experiments(std::vector<experiment::ExperimentDef> defs);
  experiment::Assignment assign(UserId user, const std::string& experiment_id);
  experiment::EngagementEvent log_event(UserId user, experiment::EventKind kind,
                                        std::optional<std::string> subject_id,
                                        std::optional<Timestamp> at = std::nullopt);
  experiment::MetricsReport compute_metrics(UserId user) const;
  std::string export_dataset(const std::string& experiment_id) const;

 private:
  template <typename F, typename Commit>
  auto transact(F&& f, Commit&& commit);
  template <typename F>
  auto transact(F&& f);

  router::ClassifierContext classifier() const {
    return router::ClassifierContext{model_.get(), options_.router_threshold};
  }

  mutable std::shared_mutex mutex_;
  State state_;
  std::shared_ptr<const router::TopicVectorModel> model_;
  std::shared_ptr<const Clock> clock_;
  PlatformOptions options_;
  std::shared_ptr<SnapshotStore> store_;
};

}  // namespace gutinstinct::service

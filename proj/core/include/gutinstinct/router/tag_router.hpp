#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gutinstinct/board/types.hpp"
#include "gutinstinct/common/ids.hpp"
#include "gutinstinct/common/time.hpp"
#include "gutinstinct/router/topic_model.hpp"

namespace gutinstinct::router {

inline constexpr double kDefaultThreshold = 0.15;

enum class MappingProvenance { seeded, curator_approved };

struct ManualMapping {
  TopicId topic_id;
  MappingProvenance provenance{MappingProvenance::seeded};
  Timestamp at;

  friend bool operator==(const ManualMapping&, const ManualMapping&) = default;
};

/// Keyed by canonical tag.
using MappingTable = std::map<std::string, ManualMapping, std::less<>>;

struct UnmappedQueueEntry {
  std::string canonical_tag;
  QuestionId example_question_id;
  std::uint64_t occurrence_count{1};
  Timestamp first_seen;

  friend bool operator==(const UnmappedQueueEntry&, const UnmappedQueueEntry&) = default;
};

using UnmappedQueue = std::map<std::string, UnmappedQueueEntry, std::less<>>;

/// Exact-key lookup. `canonical_tag` must already be normalized.
std::optional<TopicId> resolve_manual(std::string_view canonical_tag, const MappingTable& table);

/// Model and threshold used for classifier fallback. `model` may be null.
struct ClassifierContext {
  const TopicVectorModel* model{nullptr};
  double threshold{kDefaultThreshold};
};

/// Persistent half of the tag router: the manual table, the unmapped
/// curation queue, and the per-topic corpora the classifier is built from.
/// The model itself is derived data and is passed in per call.
class TagRouter {
 public:
  struct Data {
    MappingTable mappings;
    UnmappedQueue unmapped;
    Corpora corpora;

    friend bool operator==(const Data&, const Data&) = default;
  };

  TagRouter() = default;
  explicit TagRouter(Data data) : data_(std::move(data)) {}

  const Data& data() const noexcept { return data_; }
  const MappingTable& mappings() const noexcept { return data_.mappings; }
  const UnmappedQueue& unmapped_queue() const noexcept { return data_.unmapped; }
  const Corpora& corpora() const noexcept { return data_.corpora; }

  /// Installs seeded mappings. Curator-approved entries are never overwritten
  /// by a seed. Keys are normalized; an empty key is a SeedParseError.
  void seed_mappings(const std::vector<std::pair<std::string, TopicId>>& entries, Timestamp at);

  void set_corpora(Corpora corpora) { data_.corpora = std::move(corpora); }

  /// Manual table first, then the classifier on "canonical context".
  /// No side effects.
  RoutingResult resolve(std::string_view raw_tag, std::string_view context_text,
                        const ClassifierContext& classifier) const;

  /// resolve() plus curation bookkeeping: an Unmapped outcome upserts the
  /// queue entry for the canonical tag (when `record_unmapped` is set).
  RoutingResult route(std::string_view raw_tag, std::string_view context_text,
                      QuestionId example_question, Timestamp now,
                      const ClassifierContext& classifier, bool record_unmapped = true);

  /// Curator approval. Requires a moderator and a known topic; inserts a
  /// curator-approved mapping and drops the tag from the unmapped queue.
  const ManualMapping& approve_mapping(const board::UserAccount& curator,
                                       std::string_view tag, const TopicId& topic_id,
                                       bool topic_exists, Timestamp now);

  friend bool operator==(const TagRouter&, const TagRouter&) = default;

 private:
  Data data_;
};

}  // namespace gutinstinct::router

#include "gutinstinct/router/tag_router.hpp"

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/router/text.hpp"

namespace gutinstinct::router {

std::optional<TopicId> resolve_manual(std::string_view canonical_tag, const MappingTable& table) {
  const auto it = table.find(canonical_tag);
  if (it == table.end()) {
    return std::nullopt;
  }
  return it->second.topic_id;
}

void TagRouter::seed_mappings(const std::vector<std::pair<std::string, TopicId>>& entries,
                              Timestamp at) {
  MappingTable next = data_.mappings;
  for (const auto& [raw, topic] : entries) {
    std::string key = normalize(raw);
    if (key.empty()) {
      throw Error(ErrorCode::SeedParseError, "mapping tag '" + raw + "' normalizes to nothing");
    }
    if (topic.empty()) {
      throw Error(ErrorCode::SeedParseError, "mapping for '" + raw + "' has no topic");
    }
    auto it = next.find(key);
    if (it != next.end() && it->second.provenance == MappingProvenance::curator_approved) {
      continue;
    }
    next.insert_or_assign(std::move(key), ManualMapping{topic, MappingProvenance::seeded, at});
  }
  data_.mappings = std::move(next);
}

RoutingResult TagRouter::resolve(std::string_view raw_tag, std::string_view context_text,
                                 const ClassifierContext& classifier) const {
  const std::string canonical = normalize(raw_tag);
  if (auto topic = resolve_manual(canonical, data_.mappings)) {
    return RoutingResult{TopicMatch{*topic, 1.0, RouteMethod::manual}, false};
  }
  if (canonical.empty()) {
    return RoutingResult::unmapped();
  }
  if (classifier.model == nullptr) {
    return RoutingResult::unmapped(/*model_missing=*/true);
  }
  std::string text = canonical;
  if (!context_text.empty()) {
    text.push_back(' ');
    text.append(context_text);
  }
  return classify(text, *classifier.model, classifier.threshold);
}

RoutingResult TagRouter::route(std::string_view raw_tag, std::string_view context_text,
                               QuestionId example_question, Timestamp now,
                               const ClassifierContext& classifier, bool record_unmapped) {
  RoutingResult result = resolve(raw_tag, context_text, classifier);
  if (result.matched() || !record_unmapped) {
    return result;
  }
  std::string canonical = normalize(raw_tag);
  if (canonical.empty()) {
    return result;
  }
  auto it = data_.unmapped.find(canonical);
  if (it == data_.unmapped.end()) {
    UnmappedQueueEntry entry{canonical, example_question, 1, now};
    data_.unmapped.emplace(std::move(canonical), std::move(entry));
  } else {
    ++it->second.occurrence_count;
  }
  return result;
}

const ManualMapping& TagRouter::approve_mapping(const board::UserAccount& curator,
                                                std::string_view tag, const TopicId& topic_id,
                                                bool topic_exists, Timestamp now) {
  if (!curator.is_moderator()) {
    throw Error(ErrorCode::NotAuthorized, "only moderators may approve tag mappings");
  }
  if (!topic_exists) {
    throw Error(ErrorCode::UnknownTopic, "unknown topic '" + topic_id + "'");
  }
  std::string canonical = normalize(tag);
  if (canonical.empty()) {
    throw Error(ErrorCode::EmptyText, "tag is empty after normalization");
  }
  data_.unmapped.erase(canonical);
  auto [it, inserted] = data_.mappings.insert_or_assign(
      std::move(canonical), ManualMapping{topic_id, MappingProvenance::curator_approved, now});
  return it->second;
}

}  // namespace gutinstinct::router

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gutinstinct/experiment/experiment.hpp"
#include "gutinstinct/learning/learning.hpp"
#include "gutinstinct/router/topic_model.hpp"

// Seed file readers. Each reads and validates the whole input before
// returning, and reports problems as Error{SeedParseError} naming the file
// (and line, for the mapping table).

namespace gutinstinct::service {

struct TopicSeed {
  std::vector<learning::Topic> topics;
  router::Corpora corpora;
};

/// `<dir>/*.json` holds one topic document each; `<dir>/<topic_id>/*.txt`
/// holds that topic's routing corpus, one document per file, read in file
/// name order.
TopicSeed load_topics_dir(const std::filesystem::path& dir);

using MappingEntries = std::vector<std::pair<std::string, TopicId>>;

/// "tag<TAB>topic_id" per line; blank lines and lines starting with '#' are
/// skipped. Two lines mapping the same canonical tag to different topics are
/// rejected.
MappingEntries parse_mappings(std::string_view text, std::string_view source = "<mappings>");
MappingEntries load_mappings_file(const std::filesystem::path& file);

/// A JSON array of {experiment_id, conditions, salt, strategy}, or a single
/// such object.
std::vector<experiment::ExperimentDef> parse_experiments(const nlohmann::json& j);
std::vector<experiment::ExperimentDef> load_experiments_file(const std::filesystem::path& file);

}  // namespace gutinstinct::service

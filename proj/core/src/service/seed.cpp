#include "gutinstinct/service/seed.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/router/text.hpp"
#include "gutinstinct/service/codec.hpp"

namespace gutinstinct::service {
namespace fs = std::filesystem;
namespace {

[[noreturn]] void seed_error(const std::string& what) {
  throw Error(ErrorCode::SeedParseError, what);
}

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    seed_error("cannot read " + file.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool directories, std::string_view ext) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (directories ? entry.is_directory()
                    : (entry.is_regular_file() && entry.path().extension() == ext)) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TopicSeed load_topics_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    seed_error("topics directory " + dir.string() + " does not exist");
  }
  TopicSeed seed;
  std::set<TopicId> ids;
  for (const auto& file : sorted_entries(dir, false, ".json")) {
    learning::Topic topic;
    try {
      topic = nlohmann::json::parse(read_file(file)).get<learning::Topic>();
    } catch (const nlohmann::json::exception& e) {
      seed_error(file.string() + ": " + e.what());
    } catch (const Error& e) {
      seed_error(file.string() + ": " + e.what());
    }
    try {
      learning::validate_topic(topic);
    } catch (const Error& e) {
      seed_error(file.string() + ": " + e.what());
    }
    if (!ids.insert(topic.topic_id).second) {
      seed_error(file.string() + ": duplicate topic_id '" + topic.topic_id + "'");
    }
    seed.topics.push_back(std::move(topic));
  }
  if (seed.topics.empty()) {
    seed_error("no topic documents found in " + dir.string());
  }
  for (const auto& sub : sorted_entries(dir, true, "")) {
    const TopicId topic_id = sub.filename().string();
    if (!ids.contains(topic_id)) {
      seed_error("corpus directory " + sub.string() + " has no matching topic document");
    }
    auto& docs = seed.corpora[topic_id];
    for (const auto& file : sorted_entries(sub, false, ".txt")) {
      docs.push_back(read_file(file));
    }
  }
  return seed;
}

MappingEntries parse_mappings(std::string_view text, std::string_view source) {
  MappingEntries entries;
  std::map<std::string, TopicId> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    const auto where = std::string(source) + ":" + std::to_string(line_no);
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      seed_error(where + ": expected tag<TAB>topic_id");
    }
    const std::string tag(line.substr(0, tab));
    std::string_view topic_view = line.substr(tab + 1);
    while (!topic_view.empty() && (topic_view.back() == ' ' || topic_view.back() == '\t')) {
      topic_view.remove_suffix(1);
    }
    const TopicId topic(topic_view);
    if (topic.empty() || topic.find('\t') != std::string::npos) {
      seed_error(where + ": bad topic_id");
    }
    const std::string canonical = router::normalize(tag);
    if (canonical.empty()) {
      seed_error(where + ": tag is empty after normalization");
    }
    const auto [it, inserted] = seen.emplace(canonical, topic);
    if (!inserted && it->second != topic) {
      seed_error(where + ": tag '" + canonical + "' already maps to '" + it->second + "'");
    }
    if (inserted) {
      entries.emplace_back(tag, topic);
    }
    if (end == text.size()) break;
  }
  return entries;
}

MappingEntries load_mappings_file(const fs::path& file) {
  return parse_mappings(read_file(file), file.string());
}

std::vector<experiment::ExperimentDef> parse_experiments(const nlohmann::json& j) {
  std::vector<experiment::ExperimentDef> defs;
  try {
    if (j.is_array()) {
      defs = j.get<std::vector<experiment::ExperimentDef>>();
    } else {
      defs.push_back(j.get<experiment::ExperimentDef>());
    }
  } catch (const nlohmann::json::exception& e) {
    seed_error(std::string("experiment definition: ") + e.what());
  } catch (const Error& e) {
    seed_error(std::string("experiment definition: ") + e.what());
  }
  std::set<std::string> ids;
  for (const auto& def : defs) {
    try {
      experiment::validate(def);
    } catch (const Error& e) {
      seed_error(e.what());
    }
    if (!ids.insert(def.experiment_id).second) {
      seed_error("duplicate experiment_id '" + def.experiment_id + "'");
    }
  }
  return defs;
}

std::vector<experiment::ExperimentDef> load_experiments_file(const fs::path& file) {
  try {
    return parse_experiments(nlohmann::json::parse(read_file(file)));
  } catch (const nlohmann::json::exception& e) {
    seed_error(file.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigInvalid) seed_error(file.string() + ": " + e.what());
    throw;
  }
}

}  // namespace gutinstinct::service

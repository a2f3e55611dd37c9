#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

// Brute-force reference for the topic classifier. Shares no code with the
// library: its own ASCII tokenizer, string-keyed dense maps, and a direct
// reading of the weighting formulas. Fixtures fed to it must be ASCII.
namespace oracle {

using Corpora = std::map<std::string, std::vector<std::string>>;

std::vector<std::string> ascii_tokens(const std::string& text);

struct Verdict {
  std::optional<std::string> topic;  // best topic when it clears the threshold
  std::string best_topic;            // best topic regardless of threshold
  double best_score{0.0};
  std::map<std::string, double> scores;
};

Verdict classify(const std::string& text, const Corpora& corpora, double threshold);

}  // namespace oracle

#include "support/tfidf_oracle.hpp"

#include <cctype>
#include <cmath>
#include <set>

namespace oracle {

using Weights = std::map<std::string, double>;

std::vector<std::string> ascii_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.size() >= 2) out.push_back(cur);
    cur.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

namespace {

Weights counts(const std::vector<std::string>& tokens) {
  Weights w;
  for (const auto& t : tokens) w[t] += 1.0;
  return w;
}

double length(const Weights& w) {
  double s = 0;
  for (const auto& [t, v] : w) s += v * v;
  return std::sqrt(s);
}

Weights unit(Weights w) {
  const double n = length(w);
  if (n > 0) {
    for (auto& [t, v] : w) v /= n;
  }
  return w;
}

double cosine(const Weights& a, const Weights& b) {
  double d = 0;
  for (const auto& [t, v] : a) {
    const auto it = b.find(t);
    if (it != b.end()) d += v * it->second;
  }
  const double na = length(a);
  const double nb = length(b);
  if (na == 0 || nb == 0) return 0.0;
  return d / (na * nb);
}

}  // namespace

Verdict classify(const std::string& text, const Corpora& corpora, double threshold) {
  // Every document that produces tokens, remembering its topic.
  std::vector<std::pair<std::string, std::vector<std::string>>> docs;
  for (const auto& [topic, texts] : corpora) {
    for (const auto& t : texts) {
      auto toks = ascii_tokens(t);
      if (!toks.empty()) docs.emplace_back(topic, std::move(toks));
    }
  }
  const double n = static_cast<double>(docs.size());

  std::map<std::string, double> idf;
  for (const auto& [topic, toks] : docs) {
    for (const auto& t : toks) idf[t] = 0;
  }
  for (auto& [term, value] : idf) {
    double df = 0;
    for (const auto& [topic, toks] : docs) {
      for (const auto& t : toks) {
        if (t == term) {
          df += 1;
          break;
        }
      }
    }
    value = std::log((1.0 + n) / (1.0 + df)) + 1.0;
  }

  std::map<std::string, Weights> sums;
  std::map<std::string, double> doc_count;
  for (const auto& [topic, toks] : docs) {
    Weights w = counts(toks);
    for (auto& [t, v] : w) v *= idf.at(t);
    w = unit(std::move(w));
    for (const auto& [t, v] : w) sums[topic][t] += v;
    doc_count[topic] += 1;
  }

  Weights query;
  for (const auto& t : ascii_tokens(text)) {
    if (idf.count(t)) query[t] += 1.0;
  }
  for (auto& [t, v] : query) v *= idf.at(t);

  Verdict verdict;
  bool first = true;
  for (const auto& [topic, sum] : sums) {
    Weights centroid = sum;
    for (auto& [t, v] : centroid) v /= doc_count.at(topic);
    double s = cosine(query, centroid);
    s = std::min(1.0, std::max(0.0, s));
    verdict.scores[topic] = s;
    if (first || s > verdict.best_score) {
      verdict.best_topic = topic;
      verdict.best_score = s;
      first = false;
    }
  }
  if (!first && verdict.best_score >= threshold) verdict.topic = verdict.best_topic;
  return verdict;
}

}  // namespace oracle

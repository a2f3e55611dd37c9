#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gutinstinct/common/ids.hpp"
#include "gutinstinct/common/time.hpp"

namespace gutinstinct::router {

/// topic_id -> plain-text documents.
using Corpora = std::map<TopicId, std::vector<std::string>>;

/// Sparse vector over vocabulary indices, sorted by index.
using SparseVector = std::vector<std::pair<std::uint32_t, double>>;

double dot(const SparseVector& a, const SparseVector& b) noexcept;
double l2_norm(const SparseVector& v) noexcept;

/// TF-IDF nearest-centroid topic model.
///
/// idf(t) = ln((1 + N) / (1 + df(t))) + 1, where N counts documents that
/// produced at least one token. Each document vector is raw-count tf times
/// idf, L2-normalized; a topic centroid is the mean of its document vectors
/// rescaled to unit length. Topics without usable documents get no centroid.
class TopicVectorModel {
 public:
  TopicVectorModel(std::vector<std::string> vocabulary, std::vector<double> idf,
                   std::map<TopicId, SparseVector> centroids, Timestamp built_at,
                   std::uint64_t corpus_fingerprint);

  const std::vector<std::string>& vocabulary() const noexcept { return vocabulary_; }
  const std::vector<double>& idf() const noexcept { return idf_; }
  const std::map<TopicId, SparseVector>& centroids() const noexcept { return centroids_; }
  Timestamp built_at() const noexcept { return built_at_; }
  std::uint64_t corpus_fingerprint() const noexcept { return corpus_fingerprint_; }

  std::optional<std::uint32_t> index_of(std::string_view token) const;

  /// Unit-length tf-idf vector for `text`; out-of-vocabulary tokens are
  /// dropped, so the result is empty when nothing is known.
  SparseVector vectorize(std::string_view text) const;

 private:
  std::vector<std::string> vocabulary_;
  std::vector<double> idf_;
  std::map<TopicId, SparseVector> centroids_;
  Timestamp built_at_;
  std::uint64_t corpus_fingerprint_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Throws Error{EmptyCorpus} when no document anywhere yields a token.
TopicVectorModel build_model(const Corpora& corpora, Timestamp built_at);

/// FNV-1a over topic ids and documents in map order.
std::uint64_t corpus_fingerprint(const Corpora& corpora);

enum class RouteMethod { manual, classifier };

struct TopicMatch {
  TopicId topic_id;
  double score{0.0};
  RouteMethod method{RouteMethod::manual};

  friend bool operator==(const TopicMatch&, const TopicMatch&) = default;
};

struct RoutingResult {
  std::optional<TopicMatch> match;  // nullopt means Unmapped
  /// Set when the manual table missed and there was no model to fall back on.
  bool model_missing{false};

  bool matched() const noexcept { return match.has_value(); }
  static RoutingResult unmapped(bool model_missing = false) { return {std::nullopt, model_missing}; }
  friend bool operator==(const RoutingResult&, const RoutingResult&) = default;
};

/// Cosine against every centroid; the best score wins, ties go to the
/// lexicographically smallest topic id. Matched only when score >= threshold.
/// Throws InvalidArgument unless threshold is in (0, 1).
RoutingResult classify(std::string_view text, const TopicVectorModel& model, double threshold);

/// Same as above; throws Error{ModelNotBuilt} when `model` is null.
RoutingResult classify(std::string_view text, const TopicVectorModel* model, double threshold);

}  // namespace gutinstinct::router

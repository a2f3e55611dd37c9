#include "gutinstinct/router/topic_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gutinstinct/common/error.hpp"
#include "gutinstinct/common/hash.hpp"
#include "gutinstinct/router/text.hpp"

namespace gutinstinct::router {
namespace {

// Raw term counts keyed by token.
std::map<std::string, std::uint64_t> term_counts(const std::vector<std::string>& tokens) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& t : tokens) {
    ++counts[t];
  }
  return counts;
}

void normalize_in_place(SparseVector& v) {
  const double norm = l2_norm(v);
  if (norm == 0.0) {
    v.clear();
    return;
  }
  for (auto& [index, weight] : v) {
    weight /= norm;
  }
}

}  // namespace

double dot(const SparseVector& a, const SparseVector& b) noexcept {
  double sum = 0.0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      sum += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double l2_norm(const SparseVector& v) noexcept {
  double sum = 0.0;
  for (const auto& [index, weight] : v) {
    sum += weight * weight;
  }
  return std::sqrt(sum);
}

TopicVectorModel::TopicVectorModel(std::vector<std::string> vocabulary, std::vector<double> idf,
                                   std::map<TopicId, SparseVector> centroids,
                                   Timestamp built_at, std::uint64_t corpus_fingerprint)
    : vocabulary_(std::move(vocabulary)),
      idf_(std::move(idf)),
      centroids_(std::move(centroids)),
      built_at_(built_at),
      corpus_fingerprint_(corpus_fingerprint) {
  if (idf_.size() != vocabulary_.size()) {
    throw Error(ErrorCode::InvalidArgument, "idf and vocabulary sizes differ");
  }
  index_.reserve(vocabulary_.size());
  for (std::uint32_t i = 0; i < vocabulary_.size(); ++i) {
    index_.emplace(vocabulary_[i], i);
  }
}

std::optional<std::uint32_t> TopicVectorModel::index_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) {
    return std::nullopt;
  }
  return it->second;
}

SparseVector TopicVectorModel::vectorize(std::string_view text) const {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto& token : tokenize(text)) {
    if (auto idx = index_of(token)) {
      ++counts[*idx];
    }
  }
  SparseVector v;
  v.reserve(counts.size());
  for (const auto& [idx, tf] : counts) {
    v.emplace_back(idx, static_cast<double>(tf) * idf_[idx]);
  }
  normalize_in_place(v);
  return v;
}

std::uint64_t corpus_fingerprint(const Corpora& corpora) {
  std::uint64_t h = kFnvOffsetBasis;
  for (const auto& [topic, docs] : corpora) {
    h = fnv1a64(topic, h);
    h = fnv1a64(std::string_view("\x1e", 1), h);
    for (const auto& doc : docs) {
      h = fnv1a64(doc, h);
      h = fnv1a64(std::string_view("\x1f", 1), h);
    }
  }
  return h;
}

TopicVectorModel build_model(const Corpora& corpora, Timestamp built_at) {
  struct Document {
    const TopicId* topic;
    std::map<std::string, std::uint64_t> counts;
  };

  std::vector<Document> documents;
  std::set<std::string> vocab_set;
  for (const auto& [topic, docs] : corpora) {
    for (const auto& text : docs) {
      auto counts = term_counts(tokenize(text));
      if (counts.empty()) {
        continue;
      }
      for (const auto& [token, c] : counts) {
        vocab_set.insert(token);
      }
      documents.push_back({&topic, std::move(counts)});
    }
  }
  if (documents.empty()) {
    throw Error(ErrorCode::EmptyCorpus, "no topic corpus contains a usable document");
  }

  std::vector<std::string> vocabulary(vocab_set.begin(), vocab_set.end());
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < vocabulary.size(); ++i) {
    index.emplace(vocabulary[i], i);
  }

  std::vector<std::uint64_t> df(vocabulary.size(), 0);
  for (const auto& doc : documents) {
    for (const auto& [token, c] : doc.counts) {
      ++df[index.at(token)];
    }
  }
  const auto n = static_cast<double>(documents.size());
  std::vector<double> idf(vocabulary.size());
  for (std::size_t i = 0; i < idf.size(); ++i) {
    idf[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
  }

  // Sum of unit document vectors per topic.
  std::map<TopicId, std::map<std::uint32_t, double>> sums;
  std::map<TopicId, std::size_t> doc_counts;
  for (const auto& doc : documents) {
    SparseVector v;
    v.reserve(doc.counts.size());
    for (const auto& [token, tf] : doc.counts) {
      const auto idx = index.at(token);
      v.emplace_back(idx, static_cast<double>(tf) * idf[idx]);
    }
    std::sort(v.begin(), v.end());
    normalize_in_place(v);
    auto& sum = sums[*doc.topic];
    for (const auto& [idx, w] : v) {
      sum[idx] += w;
    }
    ++doc_counts[*doc.topic];
  }

  std::map<TopicId, SparseVector> centroids;
  for (const auto& [topic, sum] : sums) {
    const auto count = static_cast<double>(doc_counts[topic]);
    SparseVector centroid;
    centroid.reserve(sum.size());
    for (const auto& [idx, w] : sum) {
      centroid.emplace_back(idx, w / count);
    }
    normalize_in_place(centroid);
    if (!centroid.empty()) {
      centroids.emplace(topic, std::move(centroid));
    }
  }

  return TopicVectorModel(std::move(vocabulary), std::move(idf), std::move(centroids), built_at,
                          corpus_fingerprint(corpora));
}

RoutingResult classify(std::string_view text, const TopicVectorModel& model, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "classifier threshold must lie in (0, 1)");
  }
  const SparseVector query = model.vectorize(text);
  if (query.empty()) {
    return RoutingResult::unmapped();
  }
  const TopicId* best = nullptr;
  double best_score = -1.0;
  for (const auto& [topic, centroid] : model.centroids()) {
    const double score = std::clamp(dot(query, centroid), 0.0, 1.0);
    if (score > best_score) {
      best = &topic;
      best_score = score;
    }
  }
  if (best == nullptr || best_score < threshold) {
    return RoutingResult::unmapped();
  }
  return RoutingResult{TopicMatch{*best, best_score, RouteMethod::classifier}, false};
}

RoutingResult classify(std::string_view text, const TopicVectorModel* model, double threshold) {
  if (model == nullptr) {
    throw Error(ErrorCode::ModelNotBuilt, "topic model has not been built");
  }
  return classify(text, *model, threshold);
}

}  // namespace gutinstinct::router

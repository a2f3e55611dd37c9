#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "gutinstinct/service/platform.hpp"
#include "support/tfidf_oracle.hpp"

namespace fixtures {

namespace gi = gutinstinct;

std::filesystem::path seed_dir();

/// mkdtemp directory, removed recursively on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Applies the seed topics, mapping table and experiments to `platform`.
void apply_seed(gi::service::Platform& platform);

std::unique_ptr<gi::service::Platform> seeded_platform(
    std::shared_ptr<const gi::Clock> clock = nullptr,
    std::shared_ptr<gi::service::SnapshotStore> store = nullptr);

/// ASCII corpora and a query drawn from a shared word pool, sized for the
/// classifier oracle: 2 to 4 topics, up to 5 documents each, the odd
/// token-free document, and query words that may fall outside the corpus.
struct ClassifierFixture {
  oracle::Corpora corpora;
  std::string query;
};
ClassifierFixture random_classifier_fixture(std::mt19937_64& rng);

struct OpStats {
  std::size_t ops{0};
  std::size_t level2_attempts{0};
  std::size_t level2_accepted{0};
  std::size_t violating_attempts{0};
  std::size_t violating_rejected_not_qualified{0};
  std::size_t votes{0};
};

/// Drives `platform` with `count` random board, learning and experiment
/// operations from several users. Every level-2 attempt by a user with no
/// standing "yes" on a visible question is counted as violating, along with
/// whether it was refused with NotQualified. Expected domain errors are
/// swallowed; anything else propagates.
OpStats run_random_ops(gi::service::Platform& platform, std::mt19937_64& rng, std::size_t count);

/// Level-2 records in `state` without a qualifying level-1 answer given no
/// later than the response.
std::size_t gate_violations(const gi::service::State& state);

/// Questions whose stored score differs from a fresh count of their votes.
std::size_t score_mismatches(const gi::service::State& state);

}  // namespace fixtures

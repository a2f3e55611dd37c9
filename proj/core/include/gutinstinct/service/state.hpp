#pragma once

#include <map>
#include <string>

#include "gutinstinct/board/board.hpp"
#include "gutinstinct/experiment/experiment.hpp"
#include "gutinstinct/learning/learning.hpp"
#include "gutinstinct/router/tag_router.hpp"

namespace gutinstinct::service {

inline constexpr int kSchemaVersion = 1;

/// Everything that is persisted. One value of this type is one snapshot.
struct State {
  board::Board board;
  router::TagRouter router;
  learning::Learning learning;
  experiment::Experiments experiments;
  /// libsodium crypto_pwhash_str strings, keyed by user.
  std::map<UserId, std::string> password_hashes;

  friend bool operator==(const State&, const State&) = default;
};

}  // namespace gutinstinct::service

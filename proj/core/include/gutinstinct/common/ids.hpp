#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace gutinstinct {

/// Opaque numeric identifier. The tag parameter keeps ids of different
/// entities from being mixed up at compile time.
template <typename Tag>
struct Id {
  std::uint64_t value{0};

  friend constexpr auto operator<=>(const Id&, const Id&) = default;
};

using UserId = Id<struct UserIdTag>;
using QuestionId = Id<struct QuestionIdTag>;
using CommentId = Id<struct CommentIdTag>;
using EventId = Id<struct EventIdTag>;

/// Topic ids are human-readable slugs such as "diet".
using TopicId = std::string;

template <typename Tag>
std::string to_string(Id<Tag> id) {
  return std::to_string(id.value);
}

}  // namespace gutinstinct

template <typename Tag>
struct std::hash<gutinstinct::Id<Tag>> {
  std::size_t operator()(gutinstinct::Id<Tag> id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};

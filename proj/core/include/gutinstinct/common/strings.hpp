#pragma once

#include <algorithm>
#include <string_view>

namespace gutinstinct {

/// True when `text` holds nothing but ASCII whitespace.
inline bool is_blank(std::string_view text) noexcept {
  return std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

}  // namespace gutinstinct

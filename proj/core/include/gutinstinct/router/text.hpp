#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gutinstinct::router {

/// Canonical form of a user-entered tag.
///
/// Pipeline: lowercase, Unicode NFC, trim, collapse internal whitespace runs
/// to one space, then fold a trailing ASCII "s" off every token of at least
/// four code points unless the token ends in "ss" ("noodles" -> "noodle",
/// "fitness" stays). The result is a fixed point: normalize(normalize(x)) ==
/// normalize(x). All-whitespace input gives "".
std::string normalize(std::string_view raw);

/// Classifier tokenizer: lowercase + NFC, split on every code point that is
/// not alphanumeric, drop tokens shorter than two code points.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace gutinstinct::router

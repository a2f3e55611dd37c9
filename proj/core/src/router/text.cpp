#include "gutinstinct/router/text.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <stdexcept>

namespace gutinstinct::router {
namespace {

icu::UnicodeString lower_nfc(std::string_view text) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s.toLower(icu::Locale::getRoot());
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  icu::UnicodeString out = nfc->normalize(s, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error("ICU normalization failed");
  }
  return out;
}

// Splits into code points, grouping by `is_word`.
template <typename Pred>
std::vector<std::vector<UChar32>> split_code_points(const icu::UnicodeString& s, Pred is_word) {
  std::vector<std::vector<UChar32>> tokens;
  std::vector<UChar32> current;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (is_word(c)) {
      current.push_back(c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) {
    tokens.push_back(std::move(current));
  }
  return tokens;
}

void append_utf8(std::string& out, const std::vector<UChar32>& cps) {
  icu::UnicodeString u;
  for (UChar32 c : cps) {
    u.append(c);
  }
  u.toUTF8String(out);
}

}  // namespace

std::string normalize(std::string_view raw) {
  const icu::UnicodeString s = lower_nfc(raw);
  auto tokens = split_code_points(s, [](UChar32 c) { return !u_isUWhiteSpace(c); });
  std::string out;
  for (auto& token : tokens) {
    const std::size_t n = token.size();
    if (n >= 4 && token[n - 1] == U's' && token[n - 2] != U's') {
      token.pop_back();
    }
    if (!out.empty()) {
      out.push_back(' ');
    }
    append_utf8(out, token);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  const icu::UnicodeString s = lower_nfc(text);
  auto pieces = split_code_points(s, [](UChar32 c) { return u_isalnum(c) != 0; });
  std::vector<std::string> tokens;
  tokens.reserve(pieces.size());
  for (const auto& piece : pieces) {
    if (piece.size() < 2) {
      continue;
    }
    std::string token;
    append_utf8(token, piece);
    tokens.push_back(std::move(token));
  }
  return tokens;
}

}  // namespace gutinstinct::router

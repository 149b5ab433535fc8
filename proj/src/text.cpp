#include "qags/text.hpp"

#include <array>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace qags {

namespace chars {

bool is_space(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }
bool is_punct(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }
bool is_upper(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  return u_isupper(cp) || u_istitle(cp);
}
bool is_digit(char32_t c) { return u_isdigit(static_cast<UChar32>(c)); }
char32_t to_lower(char32_t c) { return static_cast<char32_t>(u_tolower(static_cast<UChar32>(c))); }

}  // namespace chars

namespace utf8 {

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto len = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    std::array<uint8_t, U8_MAX_LENGTH> buf{};
    int32_t n = 0;
    UBool error = false;
    U8_APPEND(buf.data(), n, U8_MAX_LENGTH, static_cast<UChar32>(c), error);
    if (error) {
      out += "\xEF\xBF\xBD";
      continue;
    }
    out.append(reinterpret_cast<const char*>(buf.data()), static_cast<std::size_t>(n));
  }
  return out;
}

std::size_t length(std::string_view text) {
  std::size_t n = 0;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto len = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    ++n;
  }
  return n;
}

std::optional<std::string> slice(std::string_view text, CharSpan span) {
  if (span.start > span.end) return std::nullopt;
  const auto decoded = decode(text);
  if (span.end > decoded.size()) return std::nullopt;
  return encode(std::u32string_view(decoded).substr(span.start, span.size()));
}

std::optional<CharSpan> find(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return std::nullopt;
  const auto pos = haystack.find(needle);
  if (pos == std::string_view::npos) return std::nullopt;
  const std::size_t start = length(haystack.substr(0, pos));
  return CharSpan{start, start + length(needle)};
}

}  // namespace utf8

std::vector<CharSpan> token_spans(std::u32string_view text) {
  std::vector<CharSpan> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && chars::is_space(text[i])) ++i;
    if (i == text.size()) break;
    const std::size_t start = i;
    while (i < text.size() && !chars::is_space(text[i])) ++i;
    spans.push_back({start, i});
  }
  return spans;
}

std::string TokenSequence::join() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

TokenSequence tokenize(std::string_view text) {
  const auto decoded = utf8::decode(text);
  TokenSequence seq;
  for (const auto& span : token_spans(decoded)) {
    seq.tokens.push_back(utf8::encode(std::u32string_view(decoded).substr(span.start, span.size())));
  }
  return seq;
}

NormalizedAnswer normalize_answer(std::string_view text) {
  std::u32string cleaned;
  for (char32_t c : utf8::decode(text)) {
    if (chars::is_punct(c)) continue;
    cleaned.push_back(chars::to_lower(c));
  }
  NormalizedAnswer out;
  for (const auto& span : token_spans(cleaned)) {
    auto token = utf8::encode(std::u32string_view(cleaned).substr(span.start, span.size()));
    if (token == "a" || token == "an" || token == "the") continue;
    out.tokens.tokens.push_back(std::move(token));
  }
  return out;
}

}  // namespace qags

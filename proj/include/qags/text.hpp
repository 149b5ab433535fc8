#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qags {

// Half-open [start, end) range of unicode code points.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool operator==(const CharSpan&) const = default;
};

struct TokenSequence {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  std::string join() const;

  bool operator==(const TokenSequence&) const = default;
};

// Lowercase, punctuation-free, article-free tokens.
struct NormalizedAnswer {
  TokenSequence tokens;

  bool operator==(const NormalizedAnswer&) const = default;
};

// Splits on unicode whitespace. Casing and attached punctuation are kept.
TokenSequence tokenize(std::string_view text);

// Extractive-QA answer normalization: lowercase, strip unicode punctuation
// (P* general categories), drop "a"/"an"/"the", split on whitespace.
NormalizedAnswer normalize_answer(std::string_view text);

namespace utf8 {

// Invalid sequences decode to U+FFFD.
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);
std::size_t length(std::string_view text);

// Slice by code point offsets; nullopt when the span is out of range.
std::optional<std::string> slice(std::string_view text, CharSpan span);

// First occurrence of `needle` in `haystack`, in code point offsets.
std::optional<CharSpan> find(std::string_view haystack, std::string_view needle);

}  // namespace utf8

namespace chars {

bool is_space(char32_t c);
bool is_punct(char32_t c);
bool is_upper(char32_t c);
bool is_digit(char32_t c);
char32_t to_lower(char32_t c);

}  // namespace chars

// Whitespace-delimited tokens of `text` with their code point spans.
std::vector<CharSpan> token_spans(std::u32string_view text);

}  // namespace qags

#pragma once

#include <optional>
#include <string>

#include "qags/text.hpp"

namespace qags {

struct SpanAnswer {
  std::string text;
  CharSpan span;

  bool operator==(const SpanAnswer&) const = default;
};

// Extractive answer: a span of the context, or an explicit no-answer.
struct Answer {
  std::optional<SpanAnswer> span;
  double confidence = 1.0;

  static Answer no_answer(double confidence = 1.0) { return Answer{std::nullopt, confidence}; }
  static Answer of(std::string text, CharSpan span, double confidence = 1.0) {
    return Answer{SpanAnswer{std::move(text), span}, confidence};
  }

  bool is_no_answer() const { return !span.has_value(); }
  // Empty for no-answer.
  const std::string& text() const;

  bool operator==(const Answer&) const = default;
};

}  // namespace qags

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qags/rng.hpp"
#include "qags/text.hpp"

namespace qags {

enum class CandidateKind { kCapitalizedSpan, kNumericExpression, kQuotedSpan, kExternal };

std::string_view to_string(CandidateKind kind);

// A span of the summary used to condition question generation.
// Invariant: utf8::slice(summary, span) == text, text has no outer whitespace.
struct AnswerCandidate {
  std::string text;
  CharSpan span;
  CandidateKind kind = CandidateKind::kCapitalizedSpan;

  bool operator==(const AnswerCandidate&) const = default;
};

// As supplied by the input record, before validation.
struct ExternalCandidate {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
};

// Raw rule-based candidates, deduplicated by normalized text, in rule order:
// capitalized runs, numeric expressions, quoted spans.
std::vector<AnswerCandidate> find_raw_candidates(std::string_view summary);

// Downsamples (seeded, order preserving) or pads by round-robin duplication to
// exactly `count` entries. Empty input stays empty.
std::vector<AnswerCandidate> fit_candidates(std::vector<AnswerCandidate> raw, std::size_t count,
                                            Rng& rng);

// Throws NoCandidates when no raw candidate exists.
std::vector<AnswerCandidate> extract_candidates(std::string_view summary,
                                                std::size_t max_candidates, Rng& rng);

// Validates externally supplied spans against the summary. Throws SpanMismatch.
std::vector<AnswerCandidate> load_external_candidates(std::string_view summary,
                                                      const std::vector<ExternalCandidate>& input);

}  // namespace qags

#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qags/backends.hpp"
#include "qags/candidates.hpp"
#include "qags/rng.hpp"

namespace qags {

enum class FilterReason { kDuplicate, kTooShort, kUnanswerable };

std::string_view to_string(FilterReason reason);

struct GeneratedQuestion {
  std::string text;
  double log_prob = 0.0;
  AnswerCandidate source_candidate;
  bool truncated = false;
  std::optional<FilterReason> filtered_reason;
  bool sampled_back = false;
};

struct QuestionSet {
  std::vector<GeneratedQuestion> selected;
  std::vector<GeneratedQuestion> rejected;
  std::size_t sampled_back = 0;
};

// QA responses keyed by (question, context). Thread-safe.
class AnswerCache {
 public:
  std::optional<Answer> find(const std::string& question, const std::string& context) const;
  void store(const std::string& question, const std::string& context, const Answer& answer);
  // Cached answer, or the backend's (stored on success).
  Answer get_or_answer(const QaBackend& qa, const std::string& question, const std::string& context);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, Answer> entries_;
};

struct GenerationSettings {
  int beam_width = 10;
  int min_len = 8;
  int max_len = 60;
};

struct Overgeneration {
  std::vector<GeneratedQuestion> questions;
  std::size_t failed_requests = 0;
};

// One QG request per candidate. Backend failures for individual candidates
// are counted; AllGenerationsFailed when none succeeds.
Overgeneration overgenerate(const QgBackend& qg, std::string_view context,
                            std::span<const AnswerCandidate> candidates,
                            const GenerationSettings& settings);

// Everything after the first '?' removed, outer whitespace trimmed.
std::string truncate_question(std::string_view text);

// Truncate, drop duplicates, drop < 3 tokens, drop summary-unanswerable,
// take top-k by (log_prob desc, text asc), then back-fill by sampling
// non-duplicate rejects without replacement.
QuestionSet filter_questions(std::vector<GeneratedQuestion> raw, const QaBackend& qa,
                             std::string_view summary, std::size_t k, Rng& rng,
                             AnswerCache* cache = nullptr);

inline constexpr std::size_t kMinQuestionTokens = 3;

}  // namespace qags

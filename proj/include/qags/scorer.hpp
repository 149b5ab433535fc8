#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qags/answer.hpp"
#include "qags/backends.hpp"
#include "qags/candidates.hpp"
#include "qags/similarity.hpp"

namespace qags {

struct ScoringConfig {
  std::size_t num_candidates = 10;
  int beam_width = 10;
  std::size_t num_questions = 20;
  SimilarityMetric similarity_metric = SimilarityMetric::kF1;
  bool prepend_summary = false;
  std::uint64_t seed = 1337;
  int min_len = 8;
  int max_len = 60;

  // Throws InvalidArgument.
  void validate() const;
};

struct ScoringInstance {
  std::string id;
  std::string article;
  std::string summary;
  // Pre-validated external candidates; empty means rule-based extraction.
  std::vector<AnswerCandidate> candidates;
};

struct QuestionRecord {
  std::string question;
  double log_prob = 0.0;
  bool sampled_back = false;
  Answer source_answer;
  Answer summary_answer;
  double similarity = 0.0;
};

enum class Degenerate { kNoCandidates, kNoQuestions };

std::string_view to_string(Degenerate d);

struct StageCounts {
  std::size_t candidates_extracted = 0;
  std::size_t questions_generated = 0;
  std::size_t questions_filtered = 0;
  std::size_t questions_sampled_back = 0;
  std::size_t questions_errored = 0;
  std::size_t generation_failures = 0;

  StageCounts& operator+=(const StageCounts& other);
};

struct QagsResult {
  std::string id;
  double score = 0.0;
  std::vector<QuestionRecord> per_question;
  std::size_t errored_questions = 0;
  std::optional<Degenerate> degenerate;
  // Set by score_batch when the instance failed as a whole.
  std::optional<std::string> error;
  StageCounts counts;
};

// Source-side answering context: the article, or summary + " " + article
// when prepend_summary is set.
std::string source_context(const ScoringInstance& instance, const ScoringConfig& config);

// Candidates -> questions -> paired answers -> similarities -> mean.
// Degenerate instances score 0. Backend errors propagate only when every
// selected question errored (or generation failed outright).
QagsResult score_instance(const ScoringInstance& instance, const ScoringConfig& config,
                          const QgBackend& qg, const QaBackend& qa);

// Scores in parallel over `jobs` workers; results follow input order and a
// failing instance yields a result with `error` set. Throws InvalidArgument
// on duplicate ids before scoring anything.
std::vector<QagsResult> score_batch(std::span<const ScoringInstance> instances,
                                    const ScoringConfig& config, const QgBackend& qg,
                                    const QaBackend& qa, std::size_t jobs = 1);

}  // namespace qags

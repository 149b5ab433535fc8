#pragma once

#include <string_view>

#include "qags/answer.hpp"

namespace qags {

enum class SimilarityMetric { kF1, kEM };

struct SimilarityScore {
  double value = 0.0;
  SimilarityMetric metric = SimilarityMetric::kF1;
};

// Token-level F1 over normalized answers. Mixed no-answer/span scores 0,
// two no-answers score 1, two spans that both normalize to nothing score 1.
SimilarityScore token_f1(const Answer& a, const Answer& b);

// 1 iff the normalized token sequences are identical (no-answer == no-answer).
SimilarityScore exact_match(const Answer& a, const Answer& b);

SimilarityScore similarity(SimilarityMetric metric, const Answer& a, const Answer& b);

std::string_view to_string(SimilarityMetric metric);
SimilarityMetric parse_similarity_metric(std::string_view name);

}  // namespace qags

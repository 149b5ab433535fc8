#include "qags/similarity.hpp"

#include <string>
#include <unordered_map>

#include "qags/errors.hpp"
#include "qags/text.hpp"

namespace qags {

const std::string& Answer::text() const {
  static const std::string kEmpty;
  return span ? span->text : kEmpty;
}

SimilarityScore token_f1(const Answer& a, const Answer& b) {
  const SimilarityMetric m = SimilarityMetric::kF1;
  if (a.is_no_answer() || b.is_no_answer()) {
    return {a.is_no_answer() == b.is_no_answer() ? 1.0 : 0.0, m};
  }
  const auto na = normalize_answer(a.text()).tokens.tokens;
  const auto nb = normalize_answer(b.text()).tokens.tokens;
  if (na.empty() || nb.empty()) return {na.empty() && nb.empty() ? 1.0 : 0.0, m};

  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& t : na) ++counts[t];
  std::size_t overlap = 0;
  for (const auto& t : nb) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return {0.0, m};
  const double precision = static_cast<double>(overlap) / static_cast<double>(na.size());
  const double recall = static_cast<double>(overlap) / static_cast<double>(nb.size());
  return {2.0 * precision * recall / (precision + recall), m};
}

SimilarityScore exact_match(const Answer& a, const Answer& b) {
  const SimilarityMetric m = SimilarityMetric::kEM;
  if (a.is_no_answer() || b.is_no_answer()) {
    return {a.is_no_answer() == b.is_no_answer() ? 1.0 : 0.0, m};
  }
  return {normalize_answer(a.text()) == normalize_answer(b.text()) ? 1.0 : 0.0, m};
}

SimilarityScore similarity(SimilarityMetric metric, const Answer& a, const Answer& b) {
  return metric == SimilarityMetric::kEM ? exact_match(a, b) : token_f1(a, b);
}

std::string_view to_string(SimilarityMetric metric) {
  return metric == SimilarityMetric::kEM ? "em" : "f1";
}

SimilarityMetric parse_similarity_metric(std::string_view name) {
  if (name == "f1" || name == "F1") return SimilarityMetric::kF1;
  if (name == "em" || name == "EM") return SimilarityMetric::kEM;
  throw InvalidArgument("unknown similarity metric: " + std::string(name));
}

}  // namespace qags

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qags/backends.hpp"
#include "qags/scorer.hpp"
#include "qags/similarity.hpp"

namespace qags {

struct SentenceJudgments {
  int index = 0;
  std::vector<int> judgments;  // 1 = consistent
};

struct AnnotationSet {
  std::string summary_id;
  std::vector<SentenceJudgments> sentences;
};

// Throws InvalidArgument on non-binary judgments or uneven annotator counts.
void validate(const AnnotationSet& annotations);

// 1 when more than half the judgments are consistent; ties go to 0.
int majority_vote(std::span<const int> judgments);

// Mean of per-sentence majority votes. Throws EmptySummary.
double human_score(const AnnotationSet& annotations);

// Sample Pearson correlation. Throws DegenerateInput on length mismatch,
// fewer than two points, or a constant sequence.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Nominal-data alpha from the coincidence matrix over every sentence unit.
// Units with fewer than two judgments are not pairable and are skipped.
double krippendorff_alpha(std::span<const AnnotationSet> annotations);

struct RankingTriplet {
  std::string source;
  std::string consistent;
  std::string inconsistent;
};

// metric(source, summary) -> score; higher means more consistent.
using SummaryMetric = std::function<double(std::string_view, std::string_view)>;

// Fraction of triplets where the consistent sentence scores strictly higher.
double ranking_accuracy(std::span<const RankingTriplet> triplets, const SummaryMetric& metric);

// QAGS as a ranking metric over the given backends; the instance id is
// derived from the inputs so each call gets a stable RNG stream.
SummaryMetric qags_metric(const ScoringConfig& config, const QgBackend& qg, const QaBackend& qa);

struct AblationGrid {
  std::vector<std::size_t> num_questions{5, 10, 20, 50};
  std::vector<SimilarityMetric> metrics{SimilarityMetric::kF1};
};

struct AblationCell {
  std::size_t num_questions = 0;
  SimilarityMetric metric = SimilarityMetric::kF1;
  double pearson = 0.0;
  std::size_t n = 0;
};

// One Pearson value per (K, metric) cell. Every cell re-runs generation and
// filtering at its own K. Instances without a human score, or that fail,
// are left out of that cell.
std::vector<AblationCell> ablation_sweep(std::span<const ScoringInstance> instances,
                                         const ScoringConfig& base, const AblationGrid& grid,
                                         const std::map<std::string, double>& human_scores,
                                         const QgBackend& qg, const QaBackend& qa,
                                         std::size_t jobs = 1);

}  // namespace qags

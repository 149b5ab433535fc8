#include "qags/eval_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "qags/errors.hpp"
#include "qags/rng.hpp"

namespace qags {

void validate(const AnnotationSet& annotations) {
  std::optional<std::size_t> count;
  for (const auto& s : annotations.sentences) {
    for (int j : s.judgments) {
      if (j != 0 && j != 1) throw InvalidArgument("judgments must be 0 or 1 (summary " + annotations.summary_id + ")");
    }
    if (s.judgments.empty()) throw InvalidArgument("sentence without judgments (summary " + annotations.summary_id + ")");
    if (count && *count != s.judgments.size()) {
      throw InvalidArgument("uneven annotator counts within summary " + annotations.summary_id);
    }
    count = s.judgments.size();
  }
}

int majority_vote(std::span<const int> judgments) {
  const auto yes = static_cast<std::size_t>(std::count(judgments.begin(), judgments.end(), 1));
  return 2 * yes > judgments.size() ? 1 : 0;
}

double human_score(const AnnotationSet& annotations) {
  if (annotations.sentences.empty()) throw EmptySummary();
  validate(annotations);
  double total = 0.0;
  for (const auto& s : annotations.sentences) total += majority_vote(s.judgments);
  return total / static_cast<double>(annotations.sentences.size());
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DegenerateInput("pearson: sequences differ in length");
  if (xs.size() < 2) throw DegenerateInput("pearson: need at least two points");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("pearson: constant sequence");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double krippendorff_alpha(std::span<const AnnotationSet> annotations) {
  // Coincidence matrix over binary values.
  double o[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  for (const auto& set : annotations) {
    for (const auto& unit : set.sentences) {
      const auto m = unit.judgments.size();
      if (m < 2) continue;
      double counts[2] = {0.0, 0.0};
      for (int j : unit.judgments) {
        if (j != 0 && j != 1) throw InvalidArgument("krippendorff_alpha: judgments must be 0 or 1");
        counts[j] += 1.0;
      }
      const double norm = static_cast<double>(m - 1);
      for (int c = 0; c < 2; ++c) {
        for (int k = 0; k < 2; ++k) {
          o[c][k] += counts[c] * (counts[k] - (c == k ? 1.0 : 0.0)) / norm;
        }
      }
    }
  }
  const double n0 = o[0][0] + o[0][1];
  const double n1 = o[1][0] + o[1][1];
  const double n = n0 + n1;
  if (n == 0.0) throw DegenerateInput("krippendorff_alpha: no unit has two or more judgments");
  const double expected = 2.0 * n0 * n1;
  if (expected == 0.0) throw DegenerateInput("krippendorff_alpha: all judgments identical");
  const double observed = o[0][1] + o[1][0];
  return 1.0 - (n - 1.0) * observed / expected;
}

double ranking_accuracy(std::span<const RankingTriplet> triplets, const SummaryMetric& metric) {
  if (triplets.empty()) throw InvalidArgument("ranking_accuracy: no triplets");
  std::size_t wins = 0;
  for (const auto& t : triplets) {
    if (metric(t.source, t.consistent) > metric(t.source, t.inconsistent)) ++wins;
  }
  return static_cast<double>(wins) / static_cast<double>(triplets.size());
}

SummaryMetric qags_metric(const ScoringConfig& config, const QgBackend& qg, const QaBackend& qa) {
  return [config, &qg, &qa](std::string_view source, std::string_view summary) {
    std::string key(source);
    key += '\x1f';
    key += summary;
    char id[17];
    std::snprintf(id, sizeof id, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
    const ScoringInstance instance{id, std::string(source), std::string(summary), {}};
    return score_instance(instance, config, qg, qa).score;
  };
}

std::vector<AblationCell> ablation_sweep(std::span<const ScoringInstance> instances,
                                         const ScoringConfig& base, const AblationGrid& grid,
                                         const std::map<std::string, double>& human_scores,
                                         const QgBackend& qg, const QaBackend& qa,
                                         std::size_t jobs) {
  if (instances.empty()) throw DegenerateInput("ablation_sweep: no instances");
  if (grid.num_questions.empty() || grid.metrics.empty()) throw InvalidArgument("ablation_sweep: empty grid");
  std::vector<AblationCell> cells;
  for (const auto k : grid.num_questions) {
    for (const auto metric : grid.metrics) {
      ScoringConfig config = base;
      config.num_questions = k;
      config.similarity_metric = metric;
      const auto results = score_batch(instances, config, qg, qa, jobs);
      std::vector<double> xs, ys;
      for (const auto& r : results) {
        if (r.error) continue;
        const auto h = human_scores.find(r.id);
        if (h == human_scores.end()) continue;
        xs.push_back(r.score);
        ys.push_back(h->second);
      }
      cells.push_back({k, metric, pearson(xs, ys), xs.size()});
    }
  }
  return cells;
}

}  // namespace qags

#include "qags/scorer.hpp"

#include <atomic>
#include <exception>
#include <set>
#include <thread>

#include "qags/answering.hpp"
#include "qags/errors.hpp"
#include "qags/question_pipeline.hpp"
#include "qags/rng.hpp"

namespace qags {

void ScoringConfig::validate() const {
  if (num_candidates < 1) throw InvalidArgument("num_candidates must be >= 1");
  if (beam_width < 1) throw InvalidArgument("beam_width must be >= 1");
  if (num_questions < 1) throw InvalidArgument("num_questions must be >= 1");
  if (min_len > max_len) throw InvalidArgument("min_len must be <= max_len");
  if (num_questions > num_candidates * static_cast<std::size_t>(beam_width)) {
    throw InvalidArgument("num_questions (" + std::to_string(num_questions) +
                          ") exceeds num_candidates x beam_width (" +
                          std::to_string(num_candidates * static_cast<std::size_t>(beam_width)) + ")");
  }
}

std::string_view to_string(Degenerate d) {
  return d == Degenerate::kNoCandidates ? "no_candidates" : "no_questions";
}

StageCounts& StageCounts::operator+=(const StageCounts& o) {
  candidates_extracted += o.candidates_extracted;
  questions_generated += o.questions_generated;
  questions_filtered += o.questions_filtered;
  questions_sampled_back += o.questions_sampled_back;
  questions_errored += o.questions_errored;
  generation_failures += o.generation_failures;
  return *this;
}

std::string source_context(const ScoringInstance& instance, const ScoringConfig& config) {
  if (!config.prepend_summary) return instance.article;
  return instance.summary + " " + instance.article;
}

QagsResult score_instance(const ScoringInstance& instance, const ScoringConfig& config,
                          const QgBackend& qg, const QaBackend& qa) {
  config.validate();
  if (instance.article.empty() || instance.summary.empty()) {
    throw InvalidArgument("instance " + instance.id + ": article and summary must be non-empty");
  }
  QagsResult result;
  result.id = instance.id;
  Rng rng(derive_seed(config.seed, instance.id));

  std::vector<AnswerCandidate> candidates;
  if (!instance.candidates.empty()) {
    result.counts.candidates_extracted = instance.candidates.size();
    candidates = fit_candidates(instance.candidates, config.num_candidates, rng);
  } else {
    auto raw = find_raw_candidates(instance.summary);
    result.counts.candidates_extracted = raw.size();
    candidates = fit_candidates(std::move(raw), config.num_candidates, rng);
  }
  if (candidates.empty()) {
    result.degenerate = Degenerate::kNoCandidates;
    return result;
  }

  // Questions are about the summary, so generation conditions on it.
  auto generated = overgenerate(qg, instance.summary, candidates,
                                {config.beam_width, config.min_len, config.max_len});
  result.counts.questions_generated = generated.questions.size();
  result.counts.generation_failures = generated.failed_requests;

  AnswerCache cache;
  auto questions = filter_questions(std::move(generated.questions), qa, instance.summary,
                                    config.num_questions, rng, &cache);
  result.counts.questions_filtered = questions.rejected.size();
  result.counts.questions_sampled_back = questions.sampled_back;
  if (questions.selected.empty()) {
    result.degenerate = Degenerate::kNoQuestions;
    return result;
  }

  const auto source = source_context(instance, config);
  std::exception_ptr last_error;
  double total = 0.0;
  for (const auto& q : questions.selected) {
    AnswerPair pair;
    try {
      pair = answer_both(qa, q, source, instance.summary, &cache);
    } catch (const BackendError&) {
      ++result.errored_questions;
      last_error = std::current_exception();
      continue;
    }
    const double sim = similarity(config.similarity_metric, pair.source_answer, pair.summary_answer).value;
    total += sim;
    result.per_question.push_back({q.text, q.log_prob, q.sampled_back, std::move(pair.source_answer),
                                   std::move(pair.summary_answer), sim});
  }
  result.counts.questions_errored = result.errored_questions;
  if (result.per_question.empty()) std::rethrow_exception(last_error);
  result.score = total / static_cast<double>(result.per_question.size());
  return result;
}

std::vector<QagsResult> score_batch(std::span<const ScoringInstance> instances,
                                    const ScoringConfig& config, const QgBackend& qg,
                                    const QaBackend& qa, std::size_t jobs) {
  config.validate();
  std::set<std::string_view> ids;
  for (const auto& inst : instances) {
    if (!ids.insert(inst.id).second) throw InvalidArgument("duplicate instance id: " + inst.id);
  }

  std::vector<QagsResult> results(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        results[i] = score_instance(instances[i], config, qg, qa);
      } catch (const std::exception& e) {
        QagsResult failed;
        failed.id = instances[i].id;
        failed.error = e.what();
        results[i] = std::move(failed);
      }
    }
  };

  const std::size_t n_workers = std::max<std::size_t>(1, std::min(jobs, instances.size()));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  return results;
}

}  // namespace qags

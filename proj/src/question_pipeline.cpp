#include "qags/question_pipeline.hpp"

#include <algorithm>
#include <unordered_map>

#include "qags/errors.hpp"
#include "qags/text.hpp"

namespace qags {

std::string_view to_string(FilterReason reason) {
  switch (reason) {
    case FilterReason::kDuplicate: return "duplicate";
    case FilterReason::kTooShort: return "too_short";
    case FilterReason::kUnanswerable: return "unanswerable";
  }
  return "unknown";
}

std::optional<Answer> AnswerCache::find(const std::string& question, const std::string& context) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find({question, context});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void AnswerCache::store(const std::string& question, const std::string& context, const Answer& answer) {
  std::lock_guard lock(mutex_);
  entries_.insert_or_assign({question, context}, answer);
}

Answer AnswerCache::get_or_answer(const QaBackend& qa, const std::string& question,
                                  const std::string& context) {
  if (auto hit = find(question, context)) return *hit;
  auto answer = qa_answer(qa, {question, context});
  store(question, context, answer);
  return answer;
}

std::size_t AnswerCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

Overgeneration overgenerate(const QgBackend& qg, std::string_view context,
                            std::span<const AnswerCandidate> candidates,
                            const GenerationSettings& settings) {
  if (candidates.empty()) throw InvalidArgument("overgenerate needs at least one candidate");
  Overgeneration out;
  std::string last_error;
  for (const auto& candidate : candidates) {
    QgRequest request{std::string(context), candidate.text, settings.beam_width, settings.min_len,
                      settings.max_len};
    try {
      for (auto& q : qg_generate(qg, request).questions) {
        GeneratedQuestion generated;
        generated.text = std::move(q.text);
        generated.log_prob = q.log_prob;
        generated.source_candidate = candidate;
        out.questions.push_back(std::move(generated));
      }
    } catch (const BackendError& e) {
      ++out.failed_requests;
      last_error = e.what();
    }
  }
  if (out.failed_requests == candidates.size()) {
    throw AllGenerationsFailed("all " + std::to_string(candidates.size()) +
                               " question generation requests failed; last error: " + last_error);
  }
  return out;
}

std::string truncate_question(std::string_view text) {
  const auto q = text.find('?');
  if (q != std::string_view::npos) text = text.substr(0, q + 1);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

QuestionSet filter_questions(std::vector<GeneratedQuestion> raw, const QaBackend& qa,
                             std::string_view summary, std::size_t k, Rng& rng,
                             AnswerCache* cache) {
  if (k == 0) throw InvalidArgument("k must be >= 1");
  QuestionSet set;

  for (auto& q : raw) {
    auto cut = truncate_question(q.text);
    q.truncated = cut != q.text;
    q.text = std::move(cut);
  }

  // Exact duplicates: keep the highest log_prob, earliest on ties.
  std::unordered_map<std::string, std::size_t> best;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = best.try_emplace(raw[i].text, i);
    if (!inserted && raw[i].log_prob > raw[it->second].log_prob) it->second = i;
  }
  std::vector<GeneratedQuestion> unique;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (best.at(raw[i].text) == i) {
      unique.push_back(std::move(raw[i]));
    } else {
      raw[i].filtered_reason = FilterReason::kDuplicate;
      set.rejected.push_back(std::move(raw[i]));
    }
  }

  std::vector<GeneratedQuestion> long_enough;
  for (auto& q : unique) {
    if (tokenize(q.text).size() < kMinQuestionTokens) {
      q.filtered_reason = FilterReason::kTooShort;
      set.rejected.push_back(std::move(q));
    } else {
      long_enough.push_back(std::move(q));
    }
  }

  AnswerCache local_cache;
  AnswerCache& answers = cache ? *cache : local_cache;
  const std::string summary_text(summary);
  std::vector<GeneratedQuestion> survivors;
  for (auto& q : long_enough) {
    if (answers.get_or_answer(qa, q.text, summary_text).is_no_answer()) {
      q.filtered_reason = FilterReason::kUnanswerable;
      set.rejected.push_back(std::move(q));
    } else {
      survivors.push_back(std::move(q));
    }
  }

  std::sort(survivors.begin(), survivors.end(), [](const GeneratedQuestion& a, const GeneratedQuestion& b) {
    if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
    return a.text < b.text;
  });
  if (survivors.size() > k) survivors.resize(k);
  set.selected = std::move(survivors);

  if (set.selected.size() < k) {
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < set.rejected.size(); ++i) {
      if (set.rejected[i].filtered_reason != FilterReason::kDuplicate) pool.push_back(i);
    }
    const auto picks = rng.sample_indices(pool.size(), k - set.selected.size());
    for (auto p : picks) {
      auto q = set.rejected[pool[p]];
      q.sampled_back = true;
      set.selected.push_back(std::move(q));
    }
    set.sampled_back = picks.size();
  }
  return set;
}

}  // namespace qags

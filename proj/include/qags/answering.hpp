#pragma once

#include <string_view>

#include "qags/backends.hpp"
#include "qags/question_pipeline.hpp"

namespace qags {

struct AnswerPair {
  GeneratedQuestion question;
  Answer source_answer;
  Answer summary_answer;
};

// Answers `question` against the source context and the summary. The
// summary side comes from `cache` when present. Any backend error
// propagates; no partial pair is produced.
AnswerPair answer_both(const QaBackend& qa, const GeneratedQuestion& question,
                       std::string_view source_context, std::string_view summary,
                       AnswerCache* cache = nullptr);

}  // namespace qags

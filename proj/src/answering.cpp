#include "qags/answering.hpp"

namespace qags {

AnswerPair answer_both(const QaBackend& qa, const GeneratedQuestion& question,
                       std::string_view source_context, std::string_view summary,
                       AnswerCache* cache) {
  const std::string source(source_context);
  const std::string summary_text(summary);
  Answer source_answer = qa_answer(qa, {question.text, source});
  Answer summary_answer = cache ? cache->get_or_answer(qa, question.text, summary_text)
                                : qa_answer(qa, {question.text, summary_text});
  return {question, std::move(source_answer), std::move(summary_answer)};
}

}  // namespace qags

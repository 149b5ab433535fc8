#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qags/answer.hpp"

namespace qags {

struct QgRequest {
  std::string context;
  std::string answer;
  int beam_width = 10;
  int min_len = 8;
  int max_len = 60;
};

struct ScoredQuestion {
  std::string text;
  double log_prob = 0.0;

  bool operator==(const ScoredQuestion&) const = default;
};

struct QgResponse {
  std::vector<ScoredQuestion> questions;
};

struct QaRequest {
  std::string question;
  std::string context;
};

using QaResponse = Answer;

class QgBackend {
 public:
  virtual ~QgBackend() = default;
  virtual QgResponse generate(const QgRequest& request) const = 0;
  virtual std::string name() const = 0;
};

class QaBackend {
 public:
  virtual ~QaBackend() = default;
  virtual QaResponse answer(const QaRequest& request) const = 0;
  virtual std::string name() const = 0;
};

// Validates the request, calls the backend, then enforces the response
// contract: log_prob <= 0, sorted by (log_prob desc, text asc), at most
// beam_width entries.
QgResponse qg_generate(const QgBackend& backend, const QgRequest& request);

// Validates the request and checks that a span answer reproduces its
// context slice (ProtocolError otherwise).
QaResponse qa_answer(const QaBackend& backend, const QaRequest& request);

// Sorts questions by (log_prob desc, text asc) and truncates to beam_width.
void canonicalize(QgResponse& response, int beam_width);

// Template QG oracle: "What is c ?", "Who is c ?", "Where is c ?" with
// log-probs -1, -2, -3.
class TemplateQg final : public QgBackend {
 public:
  QgResponse generate(const QgRequest& request) const override;
  std::string name() const override { return "oracle-template-qg"; }
};

// Span-match QA oracle: recovers the target from a template question and
// answers with its first exact occurrence in the context.
class SpanMatchQa final : public QaBackend {
 public:
  QaResponse answer(const QaRequest& request) const override;
  std::string name() const override { return "oracle-span-match-qa"; }
};

// Target of a template question ("What is X ?" -> "X"), if it is one.
std::optional<std::string> template_target(std::string_view question);

// Replays recorded (answer -> questions) and (question, context -> answer)
// fixtures. Missing entries: QG returns no questions, QA answers no-answer.
class ScriptedBackend final : public QgBackend, public QaBackend {
 public:
  struct QgEntry {
    std::optional<std::string> answer;  // nullopt matches any answer
    std::vector<ScoredQuestion> questions;
  };
  struct QaEntry {
    std::string question;
    std::optional<std::string> context;  // nullopt matches any context
    std::optional<std::string> answer_text;
    std::optional<CharSpan> answer_span;  // resolved by first occurrence if absent
  };

  ScriptedBackend(std::vector<QgEntry> qg, std::vector<QaEntry> qa);
  static ScriptedBackend from_file(const std::filesystem::path& path);
  static ScriptedBackend from_json_text(std::string_view text);

  QgResponse generate(const QgRequest& request) const override;
  QaResponse answer(const QaRequest& request) const override;
  std::string name() const override { return "scripted"; }

 private:
  std::vector<QgEntry> qg_;
  std::vector<QaEntry> qa_;
};

}  // namespace qags

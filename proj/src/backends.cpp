#include "qags/backends.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qags/errors.hpp"

namespace qags {

namespace {

constexpr std::array<std::pair<std::string_view, double>, 3> kTemplates = {{
    {"What is ", -1.0},
    {"Who is ", -2.0},
    {"Where is ", -3.0},
}};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

void canonicalize(QgResponse& response, int beam_width) {
  auto& qs = response.questions;
  std::stable_sort(qs.begin(), qs.end(), [](const ScoredQuestion& a, const ScoredQuestion& b) {
    if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
    return a.text < b.text;
  });
  if (beam_width >= 0 && qs.size() > static_cast<std::size_t>(beam_width)) {
    qs.resize(static_cast<std::size_t>(beam_width));
  }
}

QgResponse qg_generate(const QgBackend& backend, const QgRequest& request) {
  if (request.beam_width < 1) throw InvalidArgument("beam_width must be >= 1");
  if (request.min_len > request.max_len) throw InvalidArgument("min_len must be <= max_len");
  auto response = backend.generate(request);
  for (const auto& q : response.questions) {
    if (!(q.log_prob <= 0.0)) {
      throw ProtocolError("question log_prob must be <= 0, got " + std::to_string(q.log_prob));
    }
  }
  canonicalize(response, request.beam_width);
  return response;
}

QaResponse qa_answer(const QaBackend& backend, const QaRequest& request) {
  if (request.question.empty()) throw InvalidArgument("question must be non-empty");
  auto response = backend.answer(request);
  if (!(response.confidence >= 0.0 && response.confidence <= 1.0)) {
    throw ProtocolError("answer confidence outside [0, 1]");
  }
  if (response.span) {
    const auto slice = utf8::slice(request.context, response.span->span);
    if (!slice || *slice != response.span->text) {
      throw ProtocolError("answer span [" + std::to_string(response.span->span.start) + ", " +
                          std::to_string(response.span->span.end) +
                          ") does not reproduce answer text \"" + response.span->text + "\"");
    }
  }
  return response;
}

QgResponse TemplateQg::generate(const QgRequest& request) const {
  QgResponse response;
  for (const auto& [prefix, log_prob] : kTemplates) {
    response.questions.push_back({std::string(prefix) + request.answer + " ?", log_prob});
  }
  canonicalize(response, request.beam_width);
  return response;
}

std::optional<std::string> template_target(std::string_view question) {
  auto q = trim(question);
  if (q.empty() || q.back() != '?') return std::nullopt;
  q = trim(q.substr(0, q.size() - 1));
  for (const auto& [prefix, log_prob] : kTemplates) {
    if (q.size() > prefix.size() && q.substr(0, prefix.size()) == prefix) {
      auto target = trim(q.substr(prefix.size()));
      if (!target.empty()) return std::string(target);
    }
  }
  return std::nullopt;
}

QaResponse SpanMatchQa::answer(const QaRequest& request) const {
  const auto target = template_target(request.question);
  if (!target) return Answer::no_answer(1.0);
  const auto span = utf8::find(request.context, *target);
  if (!span) return Answer::no_answer(1.0);
  return Answer::of(*target, *span, 1.0);
}

ScriptedBackend::ScriptedBackend(std::vector<QgEntry> qg, std::vector<QaEntry> qa)
    : qg_(std::move(qg)), qa_(std::move(qa)) {}

ScriptedBackend ScriptedBackend::from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("scripted fixtures: ") + e.what());
  }
  std::vector<QgEntry> qg;
  std::vector<QaEntry> qa;
  try {
    for (const auto& e : doc.value("qg", nlohmann::json::array())) {
      QgEntry entry;
      if (e.contains("answer") && !e["answer"].is_null()) entry.answer = e["answer"].get<std::string>();
      for (const auto& q : e.at("questions")) {
        entry.questions.push_back({q.at("text").get<std::string>(), q.value("log_prob", 0.0)});
      }
      qg.push_back(std::move(entry));
    }
    for (const auto& e : doc.value("qa", nlohmann::json::array())) {
      QaEntry entry;
      entry.question = e.at("question").get<std::string>();
      if (e.contains("context") && !e["context"].is_null()) entry.context = e["context"].get<std::string>();
      const auto& a = e.at("answer");
      if (a.is_string()) {
        entry.answer_text = a.get<std::string>();
      } else if (a.is_object()) {
        entry.answer_text = a.at("text").get<std::string>();
        entry.answer_span = CharSpan{a.at("start").get<std::size_t>(), a.at("end").get<std::size_t>()};
      } else if (!a.is_null()) {
        throw InvalidArgument("scripted fixtures: answer must be string, object or null");
      }
      qa.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("scripted fixtures: ") + e.what());
  }
  return ScriptedBackend(std::move(qg), std::move(qa));
}

ScriptedBackend ScriptedBackend::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open scripted fixtures: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

QgResponse ScriptedBackend::generate(const QgRequest& request) const {
  const QgEntry* wildcard = nullptr;
  for (const auto& e : qg_) {
    if (e.answer && *e.answer == request.answer) {
      QgResponse r{e.questions};
      canonicalize(r, request.beam_width);
      return r;
    }
    if (!e.answer && !wildcard) wildcard = &e;
  }
  QgResponse r;
  if (wildcard) r.questions = wildcard->questions;
  canonicalize(r, request.beam_width);
  return r;
}

QaResponse ScriptedBackend::answer(const QaRequest& request) const {
  const QaEntry* match = nullptr;
  for (const auto& e : qa_) {
    if (e.question != request.question) continue;
    if (e.context && *e.context == request.context) {
      match = &e;
      break;
    }
    if (!e.context && !match) match = &e;
  }
  if (!match || !match->answer_text) return Answer::no_answer(1.0);
  if (match->answer_span) return Answer::of(*match->answer_text, *match->answer_span, 1.0);
  const auto span = utf8::find(request.context, *match->answer_text);
  if (!span) return Answer::no_answer(1.0);
  return Answer::of(*match->answer_text, *span, 1.0);
}

}  // namespace qags

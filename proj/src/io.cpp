#include "qags/io.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "qags/errors.hpp"

namespace qags::io {

using nlohmann::json;

namespace {

std::string require_string(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_string()) {
    throw InvalidArgument(std::string("missing or non-string field \"") + key + "\"");
  }
  return j[key].get<std::string>();
}

std::size_t require_index(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_unsigned()) {
    throw InvalidArgument(std::string("missing or non-negative-integer field \"") + key + "\"");
  }
  return j[key].get<std::size_t>();
}

}  // namespace

InputRecord parse_input_record(const json& j) {
  InputRecord r;
  r.id = require_string(j, "id");
  r.article = require_string(j, "article");
  r.summary = require_string(j, "summary");
  if (r.id.empty()) throw InvalidArgument("empty id");
  if (r.article.empty() || r.summary.empty()) throw InvalidArgument("article and summary must be non-empty");
  if (j.contains("candidates") && !j["candidates"].is_null()) {
    if (!j["candidates"].is_array()) throw InvalidArgument("\"candidates\" must be an array");
    std::vector<ExternalCandidate> cands;
    for (const auto& c : j["candidates"]) {
      cands.push_back({require_string(c, "text"), require_index(c, "start"), require_index(c, "end")});
    }
    r.candidates = std::move(cands);
  }
  return r;
}

AnnotationSet parse_annotation_set(const json& j) {
  AnnotationSet a;
  a.summary_id = require_string(j, "summary_id");
  if (!j.contains("sentences") || !j["sentences"].is_array()) throw InvalidArgument("missing \"sentences\" array");
  for (const auto& s : j["sentences"]) {
    SentenceJudgments sj;
    if (!s.contains("index") || !s["index"].is_number_integer()) throw InvalidArgument("sentence missing integer \"index\"");
    sj.index = s["index"].get<int>();
    if (!s.contains("judgments") || !s["judgments"].is_array()) throw InvalidArgument("sentence missing \"judgments\" array");
    for (const auto& v : s["judgments"]) {
      if (!v.is_number_integer()) throw InvalidArgument("judgments must be integers 0/1");
      sj.judgments.push_back(v.get<int>());
    }
    a.sentences.push_back(std::move(sj));
  }
  validate(a);
  return a;
}

RankingTriplet parse_triplet(const json& j) {
  RankingTriplet t{require_string(j, "source"), require_string(j, "consistent"), require_string(j, "inconsistent")};
  if (t.consistent == t.inconsistent) throw InvalidArgument("consistent and inconsistent sentences are identical");
  return t;
}

json to_json(const Answer& answer) {
  json j;
  if (answer.span) {
    j["answer"] = {{"text", answer.span->text}, {"start", answer.span->span.start}, {"end", answer.span->span.end}};
  } else {
    j["answer"] = nullptr;
  }
  j["confidence"] = answer.confidence;
  return j;
}

json to_json(const StageCounts& c) {
  return {{"candidates_extracted", c.candidates_extracted},
          {"questions_generated", c.questions_generated},
          {"questions_filtered", c.questions_filtered},
          {"questions_sampled_back", c.questions_sampled_back},
          {"questions_errored", c.questions_errored},
          {"generation_failures", c.generation_failures}};
}

json to_json(const QagsResult& r) {
  json j;
  j["id"] = r.id;
  if (r.error) {
    j["error"] = *r.error;
    return j;
  }
  j["score"] = r.score;
  j["errored_questions"] = r.errored_questions;
  j["degenerate"] = r.degenerate ? json(std::string(to_string(*r.degenerate))) : json(nullptr);
  j["counts"] = to_json(r.counts);
  auto per_question = json::array();
  for (const auto& q : r.per_question) {
    per_question.push_back({{"question", q.question},
                            {"log_prob", q.log_prob},
                            {"sampled_back", q.sampled_back},
                            {"source_answer", to_json(q.source_answer)},
                            {"summary_answer", to_json(q.summary_answer)},
                            {"similarity", q.similarity}});
  }
  j["per_question"] = std::move(per_question);
  return j;
}

json to_json(const ScoringConfig& c) {
  return {{"num_candidates", c.num_candidates}, {"beam_width", c.beam_width},
          {"num_questions", c.num_questions},   {"similarity", std::string(to_string(c.similarity_metric))},
          {"prepend_summary", c.prepend_summary}, {"seed", c.seed},
          {"min_len", c.min_len},               {"max_len", c.max_len}};
}

std::string dump_line(const json& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

std::vector<JsonlLine> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::vector<JsonlLine> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    JsonlLine entry;
    entry.line_number = number;
    try {
      entry.value = json::parse(line);
    } catch (const json::parse_error& e) {
      entry.error = e.what();
    }
    lines.push_back(std::move(entry));
  }
  return lines;
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
  static std::atomic<unsigned> counter{0};
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw InvalidArgument("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace qags::io

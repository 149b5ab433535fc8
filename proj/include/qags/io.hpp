#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qags/candidates.hpp"
#include "qags/eval_stats.hpp"
#include "qags/scorer.hpp"

namespace qags::io {

struct InputRecord {
  std::string id;
  std::string article;
  std::string summary;
  std::optional<std::vector<ExternalCandidate>> candidates;
};

// Throws InvalidArgument on schema violations.
InputRecord parse_input_record(const nlohmann::json& j);
AnnotationSet parse_annotation_set(const nlohmann::json& j);
RankingTriplet parse_triplet(const nlohmann::json& j);

nlohmann::json to_json(const Answer& answer);
nlohmann::json to_json(const QagsResult& result);
nlohmann::json to_json(const ScoringConfig& config);
nlohmann::json to_json(const StageCounts& counts);

// Serialized form used for results JSONL: compact, keys sorted.
std::string dump_line(const nlohmann::json& j);

struct JsonlLine {
  std::size_t line_number = 0;  // 1-based
  std::optional<nlohmann::json> value;
  std::string error;  // set when value is empty
};

// Blank lines are skipped.
std::vector<JsonlLine> read_jsonl(const std::filesystem::path& path);

// Writes to a sibling temp file and renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace qags::io

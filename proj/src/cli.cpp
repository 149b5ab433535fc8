#include "qags/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "qags/backends.hpp"
#include "qags/errors.hpp"
#include "qags/eval_stats.hpp"
#include "qags/http_backend.hpp"
#include "qags/io.hpp"
#include "qags/scorer.hpp"

namespace qags::cli {

namespace {

using nlohmann::json;

struct BackendOptions {
  std::string kind = "oracle";
  std::string qg_endpoint;
  std::string qa_endpoint;
  std::string scripted_fixtures;
  int max_retries = 3;
  int max_in_flight = 8;
};

struct Backends {
  std::shared_ptr<const QgBackend> qg;
  std::shared_ptr<const QaBackend> qa;
};

struct ConfigOptions {
  ScoringConfig config;
  std::string similarity = "f1";
  std::size_t jobs = 1;

  ScoringConfig resolve() const {
    ScoringConfig c = config;
    c.similarity_metric = parse_similarity_metric(similarity);
    c.validate();
    return c;
  }
};

// Every flag can be overridden through QAGS_<FLAG_NAME>.
std::string env_name(std::string flag) {
  std::string out = "QAGS_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

template <typename T>
CLI::Option* add(CLI::App* app, const std::string& flag, T& target, const std::string& help) {
  return app->add_option("--" + flag, target, help)->envname(env_name(flag))->capture_default_str();
}

void add_config_flags(CLI::App* app, ConfigOptions& o) {
  add(app, "num-candidates", o.config.num_candidates, "answer candidates per summary");
  add(app, "beam-width", o.config.beam_width, "questions requested per candidate");
  add(app, "num-questions", o.config.num_questions, "questions kept after filtering (K)");
  add(app, "similarity", o.similarity, "answer similarity: f1 | em")->check(CLI::IsMember({"f1", "em"}));
  app->add_flag("--prepend-summary", o.config.prepend_summary, "answer source-side questions against summary + article")
      ->envname(env_name("prepend-summary"));
  add(app, "seed", o.config.seed, "global RNG seed");
  add(app, "min-len", o.config.min_len, "minimum generated question length (tokens)");
  add(app, "max-len", o.config.max_len, "maximum generated question length (tokens)");
  add(app, "jobs", o.jobs, "instances scored concurrently")->check(CLI::PositiveNumber);
}

void add_backend_flags(CLI::App* app, BackendOptions& o) {
  add(app, "backend", o.kind, "oracle | http | scripted")->check(CLI::IsMember({"oracle", "http", "scripted"}));
  add(app, "qg-endpoint", o.qg_endpoint, "question generation server, http://host:port");
  add(app, "qa-endpoint", o.qa_endpoint, "question answering server, http://host:port");
  add(app, "scripted-fixtures", o.scripted_fixtures, "fixture file for --backend scripted");
  add(app, "max-retries", o.max_retries, "transport retries per request (http)");
  add(app, "max-in-flight", o.max_in_flight, "concurrent requests per endpoint (http)");
}

Backends make_backends(const BackendOptions& o) {
  if (o.kind == "oracle") return {std::make_shared<TemplateQg>(), std::make_shared<SpanMatchQa>()};
  if (o.kind == "scripted") {
    if (o.scripted_fixtures.empty()) throw InvalidArgument("--backend scripted requires --scripted-fixtures");
    auto scripted = std::make_shared<ScriptedBackend>(ScriptedBackend::from_file(o.scripted_fixtures));
    return {scripted, scripted};
  }
  if (o.qg_endpoint.empty() || o.qa_endpoint.empty()) {
    throw InvalidArgument("--backend http requires --qg-endpoint and --qa-endpoint");
  }
  HttpClientOptions http;
  http.max_retries = o.max_retries;
  http.max_in_flight = o.max_in_flight;
  return {std::make_shared<HttpBackend>(o.qg_endpoint, http), std::make_shared<HttpBackend>(o.qa_endpoint, http)};
}

json backend_json(const BackendOptions& o, const Backends& b) {
  return {{"kind", o.kind},
          {"qg", b.qg->name()},
          {"qa", b.qa->name()},
          {"qg_endpoint", o.qg_endpoint},
          {"qa_endpoint", o.qa_endpoint},
          {"scripted_fixtures", o.scripted_fixtures},
          {"max_retries", o.max_retries},
          {"max_in_flight", o.max_in_flight}};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<ScoringInstance> load_instances(const std::string& path) {
  std::vector<ScoringInstance> out;
  std::set<std::string> ids;
  for (const auto& line : io::read_jsonl(path)) {
    const auto where = path + ":" + std::to_string(line.line_number) + ": ";
    if (!line.value) throw InvalidArgument(where + line.error);
    io::InputRecord r;
    try {
      r = io::parse_input_record(*line.value);
    } catch (const Error& e) {
      throw InvalidArgument(where + e.what());
    }
    if (!ids.insert(r.id).second) throw InvalidArgument(where + "duplicate id " + r.id);
    ScoringInstance inst{r.id, r.article, r.summary, {}};
    if (r.candidates) inst.candidates = load_external_candidates(r.summary, *r.candidates);
    out.push_back(std::move(inst));
  }
  return out;
}

std::map<std::string, AnnotationSet> load_annotations(const std::string& path) {
  std::map<std::string, AnnotationSet> out;
  for (const auto& line : io::read_jsonl(path)) {
    const auto where = path + ":" + std::to_string(line.line_number) + ": ";
    if (!line.value) throw InvalidArgument(where + line.error);
    try {
      auto a = io::parse_annotation_set(*line.value);
      const auto id = a.summary_id;
      if (!out.emplace(id, std::move(a)).second) throw InvalidArgument("duplicate summary_id " + id);
    } catch (const Error& e) {
      throw InvalidArgument(where + e.what());
    }
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(' ');
    if (a == std::string::npos) continue;
    out.push_back(item.substr(a, item.find_last_not_of(' ') - a + 1));
  }
  return out;
}

std::string format_fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// ---------------------------------------------------------------- score

struct ScoreArgs {
  std::string input;
  std::string output;
  std::string manifest;
  std::size_t error_budget = 0;
  ConfigOptions config;
  BackendOptions backend;
};

int cmd_score(const ScoreArgs& a, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const auto started_at = utc_timestamp();
  const auto config = a.config.resolve();
  const auto backends = make_backends(a.backend);

  // Output slots in input order: either an instance index or an error record.
  struct Slot {
    std::optional<std::size_t> instance;
    json error_record;
  };
  std::vector<Slot> slots;
  std::vector<ScoringInstance> instances;
  std::set<std::string> ids;
  std::size_t malformed = 0;

  for (const auto& line : io::read_jsonl(a.input)) {
    std::string problem;
    std::optional<std::string> id;
    if (!line.value) {
      problem = line.error;
    } else {
      try {
        auto r = io::parse_input_record(*line.value);
        id = r.id;
        if (!ids.insert(r.id).second) {
          err << "error: " << a.input << ":" << line.line_number << ": duplicate id " << r.id << "\n";
          return kExitFatal;
        }
        ScoringInstance inst{r.id, r.article, r.summary, {}};
        if (r.candidates) inst.candidates = load_external_candidates(r.summary, *r.candidates);
        slots.push_back({instances.size(), {}});
        instances.push_back(std::move(inst));
        continue;
      } catch (const Error& e) {
        problem = e.what();
      }
    }
    ++malformed;
    err << "warning: " << a.input << ":" << line.line_number << ": " << problem << "\n";
    json rec = {{"line", line.line_number}, {"error", "malformed input: " + problem}};
    rec["id"] = id ? json(*id) : json(nullptr);
    slots.push_back({std::nullopt, std::move(rec)});
  }
  if (malformed > a.error_budget) {
    err << "error: " << malformed << " malformed input line(s) exceed the error budget of "
        << a.error_budget << "; no output written\n";
    return kExitFatal;
  }

  const auto results = score_batch(instances, config, *backends.qg, *backends.qa, a.config.jobs);

  std::string body;
  StageCounts totals;
  std::size_t errored = 0, degenerate = 0;
  double score_sum = 0.0;
  for (const auto& slot : slots) {
    if (!slot.instance) {
      body += io::dump_line(slot.error_record) + "\n";
      continue;
    }
    const auto& r = results[*slot.instance];
    if (r.error) {
      ++errored;
      err << "warning: instance " << r.id << ": " << *r.error << "\n";
    } else {
      score_sum += r.score;
      if (r.degenerate) ++degenerate;
    }
    totals += r.counts;
    body += io::dump_line(io::to_json(r)) + "\n";
  }
  io::write_atomic(a.output, body);

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  json manifest = {{"config", io::to_json(config)},
                   {"backend", backend_json(a.backend, backends)},
                   {"seed", config.seed},
                   {"input", a.input},
                   {"output", a.output},
                   {"jobs", a.config.jobs},
                   {"error_budget", a.error_budget},
                   {"started_at", started_at},
                   {"wall_seconds", wall},
                   {"instances", instances.size()},
                   {"malformed_lines", malformed},
                   {"errored_instances", errored},
                   {"degenerate_instances", degenerate},
                   {"counts", io::to_json(totals)}};
  io::write_atomic(a.manifest.empty() ? a.output + ".manifest.json" : a.manifest, manifest.dump(2) + "\n");

  const std::size_t scored = instances.size() - errored;
  out << "scored " << scored << "/" << slots.size() << " records";
  if (scored > 0) out << ", mean QAGS " << format_fixed(score_sum / static_cast<double>(scored), 4);
  out << "\n";
  return (malformed > 0 || errored > 0) ? kExitPartial : kExitOk;
}

// ---------------------------------------------------------------- correlate

struct CorrelateArgs {
  std::string results;
  std::string annotations;
  std::string metrics;
  std::string output;
};

int cmd_correlate(const CorrelateArgs& a, std::ostream& out, std::ostream& err) {
  std::map<std::string, std::map<std::string, double>> columns;  // metric -> id -> value
  std::set<std::string> result_ids;
  std::vector<std::string> missing;

  for (const auto& line : io::read_jsonl(a.results)) {
    if (!line.value) throw InvalidArgument(a.results + ":" + std::to_string(line.line_number) + ": " + line.error);
    const auto& j = *line.value;
    if (!j.contains("id") || !j["id"].is_string()) {
      missing.push_back("<" + a.results + ":" + std::to_string(line.line_number) + " without id>");
      continue;
    }
    const auto id = j["id"].get<std::string>();
    result_ids.insert(id);
    if (j.contains("error") || !j.contains("score") || !j["score"].is_number()) {
      missing.push_back(id + " (no score in results)");
      continue;
    }
    columns["QAGS"][id] = j["score"].get<double>();
  }

  if (!a.metrics.empty()) {
    for (const auto& line : io::read_jsonl(a.metrics)) {
      if (!line.value) throw InvalidArgument(a.metrics + ":" + std::to_string(line.line_number) + ": " + line.error);
      const auto& j = *line.value;
      if (!j.contains("id") || !j["id"].is_string()) throw InvalidArgument(a.metrics + ": record without id");
      const auto id = j["id"].get<std::string>();
      for (const auto& [key, value] : j.items()) {
        if (key == "id" || !value.is_number()) continue;
        columns[key][id] = value.get<double>();
      }
    }
  }

  const auto annotations = load_annotations(a.annotations);
  for (const auto& id : result_ids) {
    if (!annotations.count(id)) missing.push_back(id + " (no annotations)");
  }
  for (const auto& [id, set] : annotations) {
    if (!result_ids.count(id)) missing.push_back(id + " (no result)");
  }
  for (const auto& [name, values] : columns) {
    for (const auto& [id, set] : annotations) {
      if (!values.count(id) && result_ids.count(id) && name != "QAGS") missing.push_back(id + " (no " + name + ")");
    }
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << missing.size() << " unmatched id(s):";
    for (std::size_t i = 0; i < missing.size() && i < 10; ++i) msg << " " << missing[i];
    throw MissingIds(msg.str());
  }

  std::vector<double> human;
  for (const auto& [id, set] : annotations) human.push_back(human_score(set));

  json report = {{"n", annotations.size()}, {"correlations", json::object()}};
  out << std::left << std::setw(16) << "metric" << std::right << std::setw(12) << "pearson" << "\n";
  // QAGS first, then external columns alphabetically.
  std::vector<std::string> order{"QAGS"};
  for (const auto& [name, values] : columns) {
    if (name != "QAGS") order.push_back(name);
  }
  for (const auto& name : order) {
    std::vector<double> xs;
    for (const auto& [id, set] : annotations) xs.push_back(columns[name].at(id));
    double r;
    try {
      r = pearson(xs, human);
    } catch (const DegenerateInput& e) {
      err << "error: cannot correlate " << name << ": " << e.what() << "\n";
      return kExitFatal;
    }
    report["correlations"][name] = r;
    out << std::left << std::setw(16) << name << std::right << std::setw(12) << format_fixed(100.0 * r, 2) << "\n";
  }

  std::vector<AnnotationSet> sets;
  for (const auto& [id, set] : annotations) sets.push_back(set);
  try {
    const double alpha = krippendorff_alpha(sets);
    report["krippendorff_alpha"] = alpha;
    out << "krippendorff_alpha " << format_fixed(alpha, 4) << "\n";
  } catch (const DegenerateInput& e) {
    report["krippendorff_alpha"] = nullptr;
    out << "krippendorff_alpha n/a (" << e.what() << ")\n";
  }
  out << "n " << annotations.size() << "\n";
  if (!a.output.empty()) io::write_atomic(a.output, report.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- rank

struct RankArgs {
  std::string triplets;
  std::string metric = "qags";
  ConfigOptions config;
  BackendOptions backend;
};

int cmd_rank(const RankArgs& a, std::ostream& out, std::ostream&) {
  std::vector<RankingTriplet> triplets;
  for (const auto& line : io::read_jsonl(a.triplets)) {
    const auto where = a.triplets + ":" + std::to_string(line.line_number) + ": ";
    if (!line.value) throw InvalidArgument(where + line.error);
    try {
      triplets.push_back(io::parse_triplet(*line.value));
    } catch (const Error& e) {
      throw InvalidArgument(where + e.what());
    }
  }
  if (triplets.empty()) throw InvalidArgument(a.triplets + ": no triplets");

  double accuracy;
  if (a.metric == "constant") {
    accuracy = ranking_accuracy(triplets, [](std::string_view, std::string_view) { return 0.0; });
  } else {
    const auto config = a.config.resolve();
    const auto backends = make_backends(a.backend);
    accuracy = ranking_accuracy(triplets, qags_metric(config, *backends.qg, *backends.qa));
  }
  out << "accuracy " << format_fixed(100.0 * accuracy, 1) << "% (" << triplets.size() << " triplets)\n";
  return kExitOk;
}

// ---------------------------------------------------------------- ablate

struct AblateArgs {
  std::string input;
  std::string annotations;
  std::string k_values = "5,10,20,50";
  std::string similarity_grid = "f1";
  std::string output;
  ConfigOptions config;
  BackendOptions backend;
};

int cmd_ablate(const AblateArgs& a, std::ostream& out, std::ostream& err) {
  AblationGrid grid;
  grid.num_questions.clear();
  grid.metrics.clear();
  for (const auto& k : split_csv(a.k_values)) {
    std::size_t pos = 0;
    long long v = -1;
    try {
      v = std::stoll(k, &pos);
    } catch (const std::exception&) {
    }
    if (v < 1 || pos != k.size()) {
      err << "usage error: --k-values expects positive integers, got \"" << k << "\"\n";
      return kExitFatal;
    }
    grid.num_questions.push_back(static_cast<std::size_t>(v));
  }
  for (const auto& m : split_csv(a.similarity_grid)) grid.metrics.push_back(parse_similarity_metric(m));
  if (grid.num_questions.empty() || grid.metrics.empty()) {
    err << "usage error: the ablation grid is empty (need --k-values and --similarity-grid)\n";
    return kExitFatal;
  }

  auto base = a.config.resolve();
  // Each cell validates its own K against num_candidates x beam_width.
  for (auto k : grid.num_questions) {
    auto c = base;
    c.num_questions = k;
    c.validate();
  }
  const auto instances = load_instances(a.input);
  std::map<std::string, double> human;
  for (const auto& [id, set] : load_annotations(a.annotations)) human[id] = human_score(set);
  const auto backends = make_backends(a.backend);

  const auto cells = ablation_sweep(instances, base, grid, human, *backends.qg, *backends.qa, a.config.jobs);
  std::ostringstream csv;
  csv << "num_questions,similarity,pearson,n\n";
  csv << std::setprecision(17);
  for (const auto& c : cells) {
    csv << c.num_questions << "," << to_string(c.metric) << "," << c.pearson << "," << c.n << "\n";
  }
  if (a.output.empty()) {
    out << csv.str();
  } else {
    io::write_atomic(a.output, csv.str());
    out << "wrote " << cells.size() << " cells to " << a.output << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Question-answering based factual consistency scoring for summaries"};
  app.name("qags");
  app.require_subcommand(1);

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "score (article, summary) pairs from JSONL");
  add(score_cmd, "input", score.input, "input JSONL")->required();
  add(score_cmd, "output", score.output, "results JSONL")->required();
  add(score_cmd, "manifest", score.manifest, "run manifest path (default <output>.manifest.json)");
  add(score_cmd, "error-budget", score.error_budget, "malformed input lines tolerated");
  add_config_flags(score_cmd, score.config);
  add_backend_flags(score_cmd, score.backend);

  CorrelateArgs correlate;
  auto* correlate_cmd = app.add_subcommand("correlate", "summary-level Pearson correlation with human judgments");
  add(correlate_cmd, "results", correlate.results, "results JSONL from `score`")->required();
  add(correlate_cmd, "annotations", correlate.annotations, "annotation JSONL")->required();
  add(correlate_cmd, "metrics", correlate.metrics, "extra metric columns JSONL {id, name: value, ...}");
  add(correlate_cmd, "output", correlate.output, "JSON report with raw correlations");

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "sentence ranking accuracy over (source, consistent, inconsistent) triplets");
  add(rank_cmd, "triplets", rank.triplets, "triplet JSONL")->required();
  add(rank_cmd, "metric", rank.metric, "qags | constant")->check(CLI::IsMember({"qags", "constant"}));
  add_config_flags(rank_cmd, rank.config);
  add_backend_flags(rank_cmd, rank.backend);

  AblateArgs ablate;
  auto* ablate_cmd = app.add_subcommand("ablate", "correlation sweep over number of questions and similarity");
  add(ablate_cmd, "input", ablate.input, "input JSONL")->required();
  add(ablate_cmd, "annotations", ablate.annotations, "annotation JSONL")->required();
  add(ablate_cmd, "k-values", ablate.k_values, "comma-separated K values");
  add(ablate_cmd, "similarity-grid", ablate.similarity_grid, "comma-separated similarity metrics (f1,em)");
  add(ablate_cmd, "output", ablate.output, "CSV path (default stdout)");
  add_config_flags(ablate_cmd, ablate.config);
  add_backend_flags(ablate_cmd, ablate.backend);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitFatal;
  }

  try {
    if (score_cmd->parsed()) return cmd_score(score, out, err);
    if (correlate_cmd->parsed()) return cmd_correlate(correlate, out, err);
    if (rank_cmd->parsed()) return cmd_rank(rank, out, err);
    if (ablate_cmd->parsed()) return cmd_ablate(ablate, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}

}  // namespace qags::cli

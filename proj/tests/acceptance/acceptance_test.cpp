// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "qags/cli.hpp"
#include "qags/errors.hpp"
#include "qags/eval_stats.hpp"
#include "qags/question_pipeline.hpp"
#include "qags/scorer.hpp"
#include "qags/similarity.hpp"

namespace fs = std::filesystem;
using namespace qags;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

const std::vector<std::string>& impostors() {
  static const std::vector<std::string> v = {"Zanzibar Quill", "Yorick Marchbanks", "Wystan Pell",
                                             "Thaddeus Crane", "Solveig Aster", "Barnaby Fitch",
                                             "Cordelia Voss", "Desmond Pryce", "Ottoline Reeve",
                                             "Lucan Ashby"};
  return v;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

Outcome a1_identity() {
  TemplateQg qg;
  SpanMatchQa qa;
  std::mt19937_64 rng(101);
  const auto t0 = Clock::now();
  for (int i = 0; i < 50; ++i) {
    const auto names = gen::distinct_names(rng, 3 + rng() % 6);
    const auto doc = gen::mention_all(names);
    if (find_raw_candidates(doc).size() < 3) return {false, "document " + std::to_string(i) + " has < 3 candidates"};
    const auto r = score_instance({"doc" + std::to_string(i), doc, doc, {}}, {}, qg, qa);
    if (r.score != 1.0) return {false, "document " + std::to_string(i) + " scored " + fmt(r.score)};
  }
  const double secs = seconds_since(t0);
  return {secs < 5.0, "50 documents, " + fmt(secs) + " s"};
}

Outcome a2_similarity() {
  static const std::vector<std::string> alphabet = {"alpha", "Beta", "gamma,", "the", "delta."};
  std::mt19937_64 rng(202);
  const auto t0 = Clock::now();
  auto random_answer = [&]() -> std::pair<Answer, std::optional<oracle::Tokens>> {
    if (rng() % 20 == 0) return {Answer::no_answer(), std::nullopt};
    const std::size_t len = rng() % 9;
    std::string text;
    for (std::size_t i = 0; i < len; ++i) text += (i ? " " : "") + alphabet[rng() % alphabet.size()];
    return {Answer::of(text, {0, utf8::length(text)}), oracle::ascii_normalize(text)};
  };
  for (int i = 0; i < 10000; ++i) {
    const auto [a, ta] = random_answer();
    const auto [b, tb] = random_answer();
    const double f = token_f1(a, b).value;
    const double e = exact_match(a, b).value;
    if (f != oracle::f1(ta, tb) || e != oracle::em(ta, tb))
      return {false, "pair " + std::to_string(i) + " diverges from the oracle"};
    if (e == 1.0 && f != 1.0) return {false, "EM=1 but F1<1 on pair " + std::to_string(i)};
  }
  const double secs = seconds_since(t0);
  return {secs < 10.0, "10000 pairs exact, " + fmt(secs) + " s"};
}

Outcome a3_worked_example() {
  const fs::path fixtures = QAGS_FIXTURES_DIR;
  const auto backend = ScriptedBackend::from_file(fixtures / "worked_example.json");
  std::ifstream in(fixtures / "worked_example.jsonl");
  std::string line;
  std::getline(in, line);
  const auto rec = nlohmann::json::parse(line);
  const ScoringInstance inst{rec["id"], rec["article"], rec["summary"], {}};
  const auto r = score_instance(inst, {}, backend, backend);
  const std::vector<std::pair<std::string, std::string>> pairs = {
      {"a large knife", "a knife and a fire extinguisher"},
      {"Friday", "Friday afternoon"},
      {"Usman Khan", "Faisal Khan"},
      {"Fishmongers' Hall", "Cambridge University building"}};
  double want = 0.0;
  for (const auto& [a, s] : pairs) want += oracle::f1(oracle::ascii_normalize(a), oracle::ascii_normalize(s));
  want /= static_cast<double>(pairs.size());
  const bool ok = r.per_question.size() == 4 && std::abs(r.score - want) <= 1e-9;
  return {ok, "score " + fmt(r.score) + ", oracle " + fmt(want)};
}

Outcome a4_filtering() {
  SpanMatchQa qa;
  std::mt19937_64 gen(404);
  for (int iter = 0; iter < 1000; ++iter) {
    const auto entities = gen::distinct_names(gen, 1 + gen() % 4);
    const auto summary = gen::mention_all(entities);
    const auto pool = gen::question_pool(gen, entities, gen() % 60);
    const std::size_t k = 1 + gen() % 30;
    std::set<std::string> after_dedup;
    for (const auto& q : pool) after_dedup.insert(truncate_question(q.text));

    Rng r1(iter), r2(iter);
    const auto set = filter_questions(pool, qa, summary, k, r1);
    const auto again = filter_questions(pool, qa, summary, k, r2);
    const auto where = "case " + std::to_string(iter);
    if (set.selected.size() != std::min(k, after_dedup.size())) return {false, where + ": wrong selection size"};
    if (again.selected.size() != set.selected.size()) return {false, where + ": not deterministic"};
    std::set<std::string> seen;
    for (std::size_t i = 0; i < set.selected.size(); ++i) {
      const auto& q = set.selected[i];
      if (!seen.insert(q.text).second) return {false, where + ": duplicate " + q.text};
      if (q.text != again.selected[i].text) return {false, where + ": not deterministic"};
      if (q.sampled_back) continue;
      if (tokenize(q.text).size() < kMinQuestionTokens) return {false, where + ": short question " + q.text};
      if (qa_answer(qa, {q.text, summary}).is_no_answer()) return {false, where + ": unanswerable " + q.text};
    }
  }
  return {true, "1000 fuzzed pools"};
}

Outcome a5_hallucination() {
  TemplateQg qg;
  SpanMatchQa qa;
  std::mt19937_64 rng(505);
  for (int i = 0; i < 100; ++i) {
    auto names = gen::distinct_names(rng, 2 + rng() % 5);
    const auto article = gen::mention_all(names);
    const auto clean = score_instance({"c", article, article, {}}, {}, qg, qa).score;
    names[rng() % names.size()] = impostors()[rng() % impostors().size()];
    const auto swapped = score_instance({"s", article, gen::mention_all(names), {}}, {}, qg, qa).score;
    if (!(swapped < clean)) return {false, "pair " + std::to_string(i) + ": " + fmt(swapped) + " vs " + fmt(clean)};
  }
  return {true, "100 swapped summaries score strictly lower"};
}

AnnotationSet annotation_set(const std::vector<std::vector<int>>& units) {
  AnnotationSet set{"x", {}};
  for (std::size_t i = 0; i < units.size(); ++i) set.sentences.push_back({static_cast<int>(i), units[i]});
  return set;
}

Outcome a6_statistics() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  double worst_pearson = 0.0, worst_affine = 0.0, worst_alpha = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 3 + rng() % 30;
    std::vector<double> x(n), y(n), ax(n), ay(n);
    for (std::size_t j = 0; j < n; ++j) {
      x[j] = u(rng);
      y[j] = 0.5 * x[j] + u(rng);
    }
    const double a = 0.5 + std::abs(u(rng)), b = u(rng), c = 0.5 + std::abs(u(rng)), d = u(rng);
    for (std::size_t j = 0; j < n; ++j) {
      ax[j] = a * x[j] + b;
      ay[j] = c * y[j] + d;
    }
    const double r = pearson(x, y);
    worst_pearson = std::max(worst_pearson, std::abs(r - oracle::pearson(x, y)));
    worst_affine = std::max(worst_affine, std::abs(pearson(ax, ay) - r));
  }
  int alpha_cases = 0;
  while (alpha_cases < 50) {
    const std::size_t raters = 2 + rng() % 4;
    std::vector<std::vector<int>> units(2 + rng() % 8, std::vector<int>(raters));
    for (auto& unit : units)
      for (auto& v : unit) v = static_cast<int>(rng() % 2);
    const double want = oracle::krippendorff_alpha(units);
    if (!std::isfinite(want)) continue;  // no variation at all
    const std::vector<AnnotationSet> sets{annotation_set(units)};
    worst_alpha = std::max(worst_alpha, std::abs(krippendorff_alpha(sets) - want));
    ++alpha_cases;
  }
  const std::vector<AnnotationSet> agree{annotation_set({{1, 1, 1}, {0, 0, 0}, {1, 1, 1}})};
  const double perfect = krippendorff_alpha(agree);
  const bool ok = worst_pearson <= 1e-12 && worst_affine <= 1e-12 && worst_alpha <= 1e-9 && perfect == 1.0;
  return {ok, "max pearson err " + fmt(worst_pearson) + ", affine " + fmt(worst_affine) + ", alpha " +
                  fmt(worst_alpha) + ", perfect " + fmt(perfect)};
}

Outcome a7_ranking() {
  TemplateQg qg;
  SpanMatchQa qa;
  std::mt19937_64 rng(707);
  std::vector<RankingTriplet> swaps;
  for (int i = 0; i < 100; ++i) {
    auto names = gen::distinct_names(rng, 1 + rng() % 4);
    const auto source = gen::mention_all(names);
    names[rng() % names.size()] = impostors()[rng() % impostors().size()];
    swaps.push_back({source, source, gen::mention_all(names)});
  }
  const double qags_acc = ranking_accuracy(swaps, qags_metric({}, qg, qa));
  const double const_acc = ranking_accuracy(swaps, [](std::string_view, std::string_view) { return 0.42; });
  std::vector<RankingTriplet> many;
  for (int i = 0; i < 1000; ++i) many.push_back({"source " + std::to_string(i), "yes", "no"});
  std::mt19937_64 coin(7070);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double random_acc = ranking_accuracy(many, [&](std::string_view, std::string_view) { return u(coin); });
  const bool ok = qags_acc == 1.0 && const_acc == 0.0 && std::abs(random_acc - 0.5) <= 0.05;
  return {ok, "qags " + fmt(100 * qags_acc) + "%, constant " + fmt(100 * const_acc) + "%, random " +
                  fmt(100 * random_acc) + "%"};
}

Outcome a8_ablation() {
  TemplateQg qg;
  SpanMatchQa qa;
  std::mt19937_64 rng(808);
  std::vector<ScoringInstance> instances;
  std::map<std::string, double> human;
  for (int i = 0; i < 40; ++i) {
    auto names = gen::distinct_names(rng, 10);
    const auto article = gen::mention_all(names);
    std::vector<std::size_t> order(names.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::shuffle(order.begin(), order.end(), rng);
    const std::size_t swaps = rng() % 11;
    for (std::size_t s = 0; s < swaps; ++s) names[order[s]] = impostors()[s];
    const auto id = "doc" + std::to_string(i);
    instances.push_back({id, article, gen::mention_all(names), {}});
    human[id] = 1.0 - static_cast<double>(swaps) / 10.0;
  }
  const auto cells = ablation_sweep(instances, {}, {}, human, qg, qa, 4);
  if (cells.size() != 4) return {false, std::to_string(cells.size()) + " cells"};
  std::string detail;
  for (const auto& c : cells) detail += "K=" + std::to_string(c.num_questions) + ":" + fmt(c.pearson) + " ";
  return {cells.back().pearson >= cells.front().pearson, detail};
}

Outcome a9_reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "qags_acceptance_a9";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto input = (fs::path(QAGS_FIXTURES_DIR) / "sample_input.jsonl").string();
  std::string outputs[2];
  for (int run = 0; run < 2; ++run) {
    const auto out = (dir / ("run" + std::to_string(run) + ".jsonl")).string();
    std::ostringstream sink, err;
    const int code = cli::run({"score", "--input", input, "--output", out, "--jobs", "3", "--seed", "7"}, sink, err);
    if (code != cli::kExitOk) return {false, "score exited " + std::to_string(code) + ": " + err.str()};
    std::ifstream in(out, std::ios::binary);
    outputs[run].assign(std::istreambuf_iterator<char>(in), {});
  }
  fs::remove_all(dir);
  return {!outputs[0].empty() && outputs[0] == outputs[1], std::to_string(outputs[0].size()) + " bytes, identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"A1 identity", a1_identity},
      {"A2 similarity oracle", a2_similarity},
      {"A3 worked example", a3_worked_example},
      {"A4 filtering cascade", a4_filtering},
      {"A5 hallucination monotonicity", a5_hallucination},
      {"A6 statistics oracles", a6_statistics},
      {"A7 ranking harness", a7_ranking},
      {"A8 K-ablation shape", a8_ablation},
      {"A9 reproducibility", a9_reproducibility},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << o.detail << ")" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

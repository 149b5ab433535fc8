#include "qags/candidates.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "qags/errors.hpp"

namespace qags {

namespace {

// Abbreviations whose trailing period neither ends a sentence nor breaks a
// capitalized run ("Dr. Jane Smith").
const std::unordered_set<std::u32string>& honorifics() {
  static const std::unordered_set<std::u32string> kSet = {
      U"Mr", U"Mrs", U"Ms", U"Dr", U"St", U"Prof", U"Jr", U"Sr", U"Gen", U"Sen", U"Rep", U"Gov", U"Lt", U"Col", U"Capt"};
  return kSet;
}

const std::unordered_set<std::u32string>& unit_words() {
  static const std::unordered_set<std::u32string> kSet = {
      U"percent", U"per", U"%", U"km", U"kilometres", U"kilometers", U"miles", U"mile", U"mph",
      U"kg", U"kilograms", U"grams", U"g", U"lb", U"lbs", U"pounds", U"tons", U"tonnes", U"m",
      U"metres", U"meters", U"feet", U"ft", U"foot", U"inches", U"cm", U"mm", U"years", U"year",
      U"months", U"month", U"weeks", U"week", U"days", U"day", U"hours", U"hour", U"minutes",
      U"minute", U"seconds", U"second", U"people", U"million", U"billion", U"trillion",
      U"thousand", U"hundred", U"dollars", U"euros", U"pence", U"cents", U"degrees", U"am",
      U"pm", U"gb", U"mb", U"tb", U"acres", U"hectares", U"litres", U"liters"};
  return kSet;
}

bool is_apostrophe(char32_t c) { return c == U'\'' || c == U'’'; }
bool is_sentence_end(char32_t c) { return c == U'.' || c == U'!' || c == U'?' || c == U'…'; }

struct Token {
  CharSpan span;
  std::size_t lead = 0;       // leading punctuation
  std::size_t trail = 0;      // trailing punctuation
  std::size_t num_trail = 0;  // trailing punctuation other than '%'
  std::u32string_view core;   // token minus lead/trail
};

class Scanner {
 public:
  explicit Scanner(std::u32string_view text) : text_(text) {
    for (const auto& span : token_spans(text)) {
      Token t;
      t.span = span;
      const auto word = text.substr(span.start, span.size());
      while (t.lead < word.size() && chars::is_punct(word[t.lead])) ++t.lead;
      while (t.trail < word.size() - t.lead && chars::is_punct(word[word.size() - 1 - t.trail])) {
        ++t.trail;
      }
      while (t.num_trail < word.size() - t.lead) {
        const char32_t c = word[word.size() - 1 - t.num_trail];
        if (!chars::is_punct(c) || c == U'%' || c == U'‰') break;
        ++t.num_trail;
      }
      t.core = word.substr(t.lead, word.size() - t.lead - t.trail);
      tokens_.push_back(t);
    }
  }

  std::vector<AnswerCandidate> capitalized_runs() const {
    std::vector<AnswerCandidate> out;
    std::size_t i = 0;
    while (i < tokens_.size()) {
      if (!is_capitalized(i)) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (!breaks_after(j) && j + 1 < tokens_.size() && is_capitalized(j + 1) &&
             tokens_[j + 1].lead == 0) {
        ++j;
      }
      if (!(i == j && sentence_initial(i))) {
        emit(out, tokens_[i].span.start + tokens_[i].lead, tokens_[j].span.end - tokens_[j].trail,
             CandidateKind::kCapitalizedSpan);
      }
      i = j + 1;
    }
    return out;
  }

  std::vector<AnswerCandidate> numeric_expressions() const {
    std::vector<AnswerCandidate> out;
    std::size_t i = 0;
    while (i < tokens_.size()) {
      if (!is_numeric(i)) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (tokens_[j].num_trail == 0 && j + 1 < tokens_.size() && is_numeric(j + 1) &&
             tokens_[j + 1].lead == 0) {
        ++j;
      }
      std::size_t end = tokens_[j].span.end - tokens_[j].num_trail;
      std::size_t next = j + 1;
      if (tokens_[j].num_trail == 0 && next < tokens_.size() && tokens_[next].lead == 0 &&
          is_unit(tokens_[next].core)) {
        end = tokens_[next].span.end - tokens_[next].trail;
        ++next;
      }
      emit(out, tokens_[i].span.start + tokens_[i].lead, end, CandidateKind::kNumericExpression);
      i = next;
    }
    return out;
  }

  std::vector<AnswerCandidate> quoted_spans() const {
    std::vector<AnswerCandidate> out;
    constexpr auto kNone = std::u32string_view::npos;
    std::size_t straight_open = kNone;
    std::size_t curly_open = kNone;
    for (std::size_t k = 0; k < text_.size(); ++k) {
      const char32_t c = text_[k];
      if (c == U'"') {
        if (straight_open != kNone) {
          emit_trimmed(out, straight_open + 1, k);
          straight_open = kNone;
        } else {
          straight_open = k;
        }
      } else if (c == U'“') {
        curly_open = k;
      } else if (c == U'”' && curly_open != kNone) {
        emit_trimmed(out, curly_open + 1, k);
        curly_open = kNone;
      }
    }
    return out;
  }

 private:
  bool is_capitalized(std::size_t i) const {
    const auto& core = tokens_[i].core;
    return !core.empty() && chars::is_upper(core.front());
  }

  bool is_numeric(std::size_t i) const {
    const auto& core = tokens_[i].core;
    return std::any_of(core.begin(), core.end(), chars::is_digit);
  }

  static bool is_unit(std::u32string_view core) {
    std::u32string lower;
    for (char32_t c : core) lower.push_back(chars::to_lower(c));
    return unit_words().count(lower) > 0;
  }

  bool is_honorific(std::size_t i) const {
    const auto& t = tokens_[i];
    return t.trail == 1 && text_[t.span.end - 1] == U'.' && honorifics().count(std::u32string(t.core)) > 0;
  }

  // Run continues only across tokens whose trailing punctuation is
  // apostrophes (possessive plurals) or an honorific period.
  bool breaks_after(std::size_t i) const {
    const auto& t = tokens_[i];
    if (is_honorific(i)) return false;
    for (std::size_t k = t.span.end - t.trail; k < t.span.end; ++k) {
      if (!is_apostrophe(text_[k])) return true;
    }
    return false;
  }

  bool sentence_initial(std::size_t i) const {
    if (i == 0) return true;
    if (is_honorific(i - 1)) return false;
    const auto& prev = tokens_[i - 1];
    for (std::size_t k = prev.span.end - prev.trail; k < prev.span.end; ++k) {
      if (is_sentence_end(text_[k])) return true;
    }
    return false;
  }

  void emit(std::vector<AnswerCandidate>& out, std::size_t start, std::size_t end,
            CandidateKind kind) const {
    if (end <= start) return;
    out.push_back({utf8::encode(text_.substr(start, end - start)), {start, end}, kind});
  }

  void emit_trimmed(std::vector<AnswerCandidate>& out, std::size_t start, std::size_t end) const {
    while (start < end && chars::is_space(text_[start])) ++start;
    while (end > start && chars::is_space(text_[end - 1])) --end;
    emit(out, start, end, CandidateKind::kQuotedSpan);
  }

  std::u32string_view text_;
  std::vector<Token> tokens_;
};

}  // namespace

std::string_view to_string(CandidateKind kind) {
  switch (kind) {
    case CandidateKind::kCapitalizedSpan: return "capitalized_span";
    case CandidateKind::kNumericExpression: return "numeric_expression";
    case CandidateKind::kQuotedSpan: return "quoted_span";
    case CandidateKind::kExternal: return "external";
  }
  return "unknown";
}

std::vector<AnswerCandidate> find_raw_candidates(std::string_view summary) {
  const auto decoded = utf8::decode(summary);
  const Scanner scanner(decoded);

  std::vector<AnswerCandidate> out;
  std::set<std::string> seen;
  auto take = [&](std::vector<AnswerCandidate> found) {
    for (auto& c : found) {
      auto key = normalize_answer(c.text).tokens.join();
      if (key.empty() || !seen.insert(std::move(key)).second) continue;
      out.push_back(std::move(c));
    }
  };
  take(scanner.capitalized_runs());
  take(scanner.numeric_expressions());
  take(scanner.quoted_spans());
  return out;
}

std::vector<AnswerCandidate> fit_candidates(std::vector<AnswerCandidate> raw, std::size_t count,
                                            Rng& rng) {
  if (count == 0) throw InvalidArgument("candidate count must be >= 1");
  if (raw.empty()) return raw;
  if (raw.size() > count) {
    auto keep = rng.sample_indices(raw.size(), count);
    std::sort(keep.begin(), keep.end());
    std::vector<AnswerCandidate> out;
    out.reserve(count);
    for (auto idx : keep) out.push_back(std::move(raw[idx]));
    return out;
  }
  const std::size_t distinct = raw.size();
  raw.reserve(count);
  for (std::size_t i = distinct; i < count; ++i) raw.push_back(raw[i % distinct]);
  return raw;
}

std::vector<AnswerCandidate> extract_candidates(std::string_view summary,
                                                std::size_t max_candidates, Rng& rng) {
  if (max_candidates == 0) throw InvalidArgument("max_candidates must be >= 1");
  auto raw = find_raw_candidates(summary);
  if (raw.empty()) throw NoCandidates();
  return fit_candidates(std::move(raw), max_candidates, rng);
}

std::vector<AnswerCandidate> load_external_candidates(std::string_view summary,
                                                      const std::vector<ExternalCandidate>& input) {
  std::vector<AnswerCandidate> out;
  if (input.empty()) return out;
  const auto decoded = utf8::decode(summary);
  for (const auto& c : input) {
    if (c.start >= c.end || c.end > decoded.size()) {
      throw SpanMismatch("candidate span [" + std::to_string(c.start) + ", " +
                         std::to_string(c.end) + ") out of range for summary");
    }
    auto slice = utf8::encode(std::u32string_view(decoded).substr(c.start, c.end - c.start));
    if (slice != c.text) {
      throw SpanMismatch("candidate \"" + c.text + "\" does not match summary slice \"" + slice + "\"");
    }
    const auto& d = decoded;
    if (chars::is_space(d[c.start]) || chars::is_space(d[c.end - 1])) {
      throw SpanMismatch("candidate \"" + c.text + "\" has surrounding whitespace");
    }
    out.push_back({c.text, {c.start, c.end}, CandidateKind::kExternal});
  }
  return out;
}

}  // namespace qags

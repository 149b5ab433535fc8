#include <gtest/gtest.h>

#include "qags/backends.hpp"
#include "qags/errors.hpp"

namespace qags {
namespace {

TEST(TemplateQg, EmitsThreeTemplatesInOrder) {
  TemplateQg qg;
  const auto r = qg_generate(qg, {"any context", "Friday", 10, 8, 60});
  ASSERT_EQ(r.questions.size(), 3u);
  EXPECT_EQ(r.questions[0], (ScoredQuestion{"What is Friday ?", -1.0}));
  EXPECT_EQ(r.questions[1], (ScoredQuestion{"Who is Friday ?", -2.0}));
  EXPECT_EQ(r.questions[2], (ScoredQuestion{"Where is Friday ?", -3.0}));
}

TEST(TemplateQg, RespectsBeamWidth) {
  TemplateQg qg;
  EXPECT_EQ(qg_generate(qg, {"ctx", "Friday", 2, 8, 60}).questions.size(), 2u);
  EXPECT_LE(qg_generate(qg, {"ctx", "Friday", 10, 8, 60}).questions.size(), 10u);
}

TEST(QgGenerate, RejectsBadRequests) {
  TemplateQg qg;
  EXPECT_THROW(qg_generate(qg, {"ctx", "x", 0, 8, 60}), InvalidArgument);
  EXPECT_THROW(qg_generate(qg, {"ctx", "x", 5, 61, 60}), InvalidArgument);
}

class FixedQg : public QgBackend {
 public:
  explicit FixedQg(std::vector<ScoredQuestion> qs) : qs_(std::move(qs)) {}
  QgResponse generate(const QgRequest&) const override { return {qs_}; }
  std::string name() const override { return "fixed"; }

 private:
  std::vector<ScoredQuestion> qs_;
};

TEST(QgGenerate, EnforcesOrderingWithLexicographicTies) {
  FixedQg qg({{"b ?", -2.0}, {"z ?", -1.0}, {"a ?", -2.0}, {"c ?", -0.5}});
  const auto r = qg_generate(qg, {"ctx", "x", 3, 8, 60});
  ASSERT_EQ(r.questions.size(), 3u);
  EXPECT_EQ(r.questions[0].text, "c ?");
  EXPECT_EQ(r.questions[1].text, "z ?");
  EXPECT_EQ(r.questions[2].text, "a ?");
}

TEST(QgGenerate, RejectsPositiveLogProb) {
  FixedQg qg({{"a ?", 0.5}});
  EXPECT_THROW(qg_generate(qg, {"ctx", "x", 3, 8, 60}), ProtocolError);
}

TEST(SpanMatchQa, AnswersFirstOccurrence) {
  SpanMatchQa qa;
  const auto a = qa_answer(qa, {"What is Friday ?", "On Friday and again Friday."});
  ASSERT_FALSE(a.is_no_answer());
  EXPECT_EQ(a.text(), "Friday");
  EXPECT_EQ(a.span->span, (CharSpan{3, 9}));
  EXPECT_EQ(a.confidence, 1.0);
}

TEST(SpanMatchQa, NoAnswerWhenAbsent) {
  SpanMatchQa qa;
  const auto a = qa_answer(qa, {"What is Friday ?", "It happened on Monday."});
  EXPECT_TRUE(a.is_no_answer());
  EXPECT_EQ(a.confidence, 1.0);
  EXPECT_TRUE(qa_answer(qa, {"Why did it happen ?", "Friday"}).is_no_answer());
}

TEST(SpanMatchQa, PureFunction) {
  SpanMatchQa qa;
  const QaRequest req{"Who is Usman Khan ?", "Usman Khan was there."};
  EXPECT_EQ(qa_answer(qa, req), qa_answer(qa, req));
}

TEST(TemplateTarget, Parses) {
  EXPECT_EQ(template_target("What is Friday ?"), "Friday");
  EXPECT_EQ(template_target("Where is Fishmongers' Hall?"), "Fishmongers' Hall");
  EXPECT_FALSE(template_target("What is ?").has_value());
  EXPECT_FALSE(template_target("When did it happen ?").has_value());
}

class BadSpanQa : public QaBackend {
 public:
  QaResponse answer(const QaRequest&) const override { return Answer::of("Friday", {0, 6}); }
  std::string name() const override { return "bad"; }
};

TEST(QaAnswer, RejectsSpanNotMatchingContext) {
  BadSpanQa qa;
  EXPECT_THROW(qa_answer(qa, {"What is Friday ?", "Monday came first"}), ProtocolError);
  EXPECT_THROW(qa_answer(qa, {"What is Friday ?", "Fri"}), ProtocolError);
  EXPECT_NO_THROW(qa_answer(qa, {"What is Friday ?", "Friday came first"}));
  EXPECT_THROW(qa_answer(qa, {"", "Friday"}), InvalidArgument);
}

TEST(ScriptedBackend, ReplaysFixtures) {
  const auto backend = ScriptedBackend::from_json_text(R"({
    "qg": [
      {"answer": "Friday", "questions": [{"text": "When ?", "log_prob": -0.5}]},
      {"questions": [{"text": "Who did it ?", "log_prob": -1.0}, {"text": "Where ?", "log_prob": -0.1}]}
    ],
    "qa": [
      {"question": "Who did it ?", "context": "Khan did it.", "answer": {"text": "Khan", "start": 0, "end": 4}},
      {"question": "Who did it ?", "answer": "Smith"},
      {"question": "Where ?", "answer": null}
    ]
  })");
  EXPECT_EQ(qg_generate(backend, {"c", "Friday", 10, 8, 60}).questions.size(), 1u);
  const auto wild = qg_generate(backend, {"c", "Monday", 10, 8, 60});
  ASSERT_EQ(wild.questions.size(), 2u);
  EXPECT_EQ(wild.questions[0].text, "Where ?");

  EXPECT_EQ(qa_answer(backend, {"Who did it ?", "Khan did it."}).text(), "Khan");
  const auto resolved = qa_answer(backend, {"Who did it ?", "It was Smith."});
  EXPECT_EQ(resolved.text(), "Smith");
  EXPECT_EQ(resolved.span->span, (CharSpan{7, 12}));
  EXPECT_TRUE(qa_answer(backend, {"Who did it ?", "Nobody knows."}).is_no_answer());
  EXPECT_TRUE(qa_answer(backend, {"Where ?", "Anywhere"}).is_no_answer());
  EXPECT_TRUE(qa_answer(backend, {"Unknown ?", "Anywhere"}).is_no_answer());
}

TEST(ScriptedBackend, RejectsMalformedFixtures) {
  EXPECT_THROW(ScriptedBackend::from_json_text("{not json"), InvalidArgument);
  EXPECT_THROW(ScriptedBackend::from_json_text(R"({"qa": [{"answer": "x"}]})"), InvalidArgument);
  EXPECT_THROW(ScriptedBackend::from_file("/nonexistent/fixtures.json"), InvalidArgument);
}

}  // namespace
}  // namespace qags

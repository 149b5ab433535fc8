#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qags/backends.hpp"
#include "qags/candidates.hpp"
#include "qags/errors.hpp"
#include "qags/eval_stats.hpp"
#include "qags/http_backend.hpp"
#include "qags/io.hpp"
#include "qags/scorer.hpp"
#include "qags/similarity.hpp"
#include "qags/text.hpp"

namespace py = pybind11;

namespace {

qags::Answer to_answer(const std::optional<std::string>& text) {
  if (!text) return qags::Answer::no_answer();
  return qags::Answer::of(*text, {0, qags::utf8::length(*text)});
}

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

qags::AnnotationSet to_annotation_set(const py::dict& d) {
  auto text = py::module_::import("json").attr("dumps")(d).cast<std::string>();
  return qags::io::parse_annotation_set(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of the qags factual consistency scorer";

  auto base = py::register_exception<qags::Error>(m, "QagsError", PyExc_ValueError);
  py::register_exception<qags::DegenerateInput>(m, "DegenerateInput", base.ptr());
  auto backend_error = py::register_exception<qags::BackendError>(m, "BackendError", base.ptr());
  py::register_exception<qags::BackendUnavailable>(m, "BackendUnavailable", backend_error.ptr());
  py::register_exception<qags::ProtocolError>(m, "ProtocolError", backend_error.ptr());
  py::register_exception<qags::BackendRefused>(m, "BackendRefused", backend_error.ptr());
  py::register_exception<qags::AllGenerationsFailed>(m, "AllGenerationsFailed", backend_error.ptr());

  m.def("tokenize", [](const std::string& text) { return qags::tokenize(text).tokens; }, py::arg("text"));
  m.def("normalize_answer", [](const std::string& text) { return qags::normalize_answer(text).tokens.tokens; },
        py::arg("text"));
  m.def("token_f1",
        [](const std::optional<std::string>& a, const std::optional<std::string>& b) {
          return qags::token_f1(to_answer(a), to_answer(b)).value;
        },
        py::arg("a"), py::arg("b"), "Token F1 between two answers; None is no-answer.");
  m.def("exact_match",
        [](const std::optional<std::string>& a, const std::optional<std::string>& b) {
          return qags::exact_match(to_answer(a), to_answer(b)).value;
        },
        py::arg("a"), py::arg("b"));

  py::class_<qags::AnswerCandidate>(m, "AnswerCandidate")
      .def_readonly("text", &qags::AnswerCandidate::text)
      .def_property_readonly("start", [](const qags::AnswerCandidate& c) { return c.span.start; })
      .def_property_readonly("end", [](const qags::AnswerCandidate& c) { return c.span.end; })
      .def_property_readonly("kind", [](const qags::AnswerCandidate& c) { return std::string(qags::to_string(c.kind)); })
      .def("__repr__", [](const qags::AnswerCandidate& c) {
        return "AnswerCandidate(" + c.text + ", " + std::to_string(c.span.start) + ", " + std::to_string(c.span.end) + ")";
      });

  m.def("extract_candidates",
        [](const std::string& summary, std::size_t max_candidates, std::uint64_t seed) {
          qags::Rng rng(seed);
          return qags::extract_candidates(summary, max_candidates, rng);
        },
        py::arg("summary"), py::arg("max_candidates") = 10, py::arg("seed") = 1337);

  py::class_<qags::ScoringConfig>(m, "ScoringConfig")
      .def(py::init<>())
      .def_readwrite("num_candidates", &qags::ScoringConfig::num_candidates)
      .def_readwrite("beam_width", &qags::ScoringConfig::beam_width)
      .def_readwrite("num_questions", &qags::ScoringConfig::num_questions)
      .def_property(
          "similarity",
          [](const qags::ScoringConfig& c) { return std::string(qags::to_string(c.similarity_metric)); },
          [](qags::ScoringConfig& c, const std::string& s) { c.similarity_metric = qags::parse_similarity_metric(s); })
      .def_readwrite("prepend_summary", &qags::ScoringConfig::prepend_summary)
      .def_readwrite("seed", &qags::ScoringConfig::seed)
      .def_readwrite("min_len", &qags::ScoringConfig::min_len)
      .def_readwrite("max_len", &qags::ScoringConfig::max_len)
      .def("validate", &qags::ScoringConfig::validate);

  py::class_<qags::QgBackend, std::shared_ptr<qags::QgBackend>>(m, "QgBackend")
      .def_property_readonly("name", &qags::QgBackend::name);
  py::class_<qags::QaBackend, std::shared_ptr<qags::QaBackend>>(m, "QaBackend")
      .def_property_readonly("name", &qags::QaBackend::name);
  py::class_<qags::TemplateQg, qags::QgBackend, std::shared_ptr<qags::TemplateQg>>(m, "TemplateQg").def(py::init<>());
  py::class_<qags::SpanMatchQa, qags::QaBackend, std::shared_ptr<qags::SpanMatchQa>>(m, "SpanMatchQa").def(py::init<>());
  py::class_<qags::ScriptedBackend, qags::QgBackend, qags::QaBackend, std::shared_ptr<qags::ScriptedBackend>>(
      m, "ScriptedBackend")
      .def_static("from_file", [](const std::string& path) {
        return std::make_shared<qags::ScriptedBackend>(qags::ScriptedBackend::from_file(path));
      })
      .def_static("from_json", [](const std::string& text) {
        return std::make_shared<qags::ScriptedBackend>(qags::ScriptedBackend::from_json_text(text));
      });
  py::class_<qags::HttpBackend, qags::QgBackend, qags::QaBackend, std::shared_ptr<qags::HttpBackend>>(m, "HttpBackend")
      .def(py::init([](const std::string& endpoint, int max_retries, int max_in_flight) {
             qags::HttpClientOptions options;
             options.max_retries = max_retries;
             options.max_in_flight = max_in_flight;
             return std::make_shared<qags::HttpBackend>(endpoint, options);
           }),
           py::arg("endpoint"), py::arg("max_retries") = 3, py::arg("max_in_flight") = 8)
      .def("health", [](const qags::HttpBackend& b) {
        auto h = b.health();
        py::dict d;
        d["status"] = h.status;
        d["qg_model"] = h.qg_model;
        d["qa_model"] = h.qa_model;
        return d;
      });

  m.def("score",
        [](const std::string& article, const std::string& summary, const qags::ScoringConfig& config,
           std::shared_ptr<qags::QgBackend> qg, std::shared_ptr<qags::QaBackend> qa, const std::string& id) {
          if (!qg) qg = std::make_shared<qags::TemplateQg>();
          if (!qa) qa = std::make_shared<qags::SpanMatchQa>();
          qags::QagsResult result;
          {
            py::gil_scoped_release release;
            result = qags::score_instance({id, article, summary, {}}, config, *qg, *qa);
          }
          return to_python(qags::io::to_json(result));
        },
        py::arg("article"), py::arg("summary"), py::arg("config") = qags::ScoringConfig{},
        py::arg("qg") = nullptr, py::arg("qa") = nullptr, py::arg("id") = "",
        "Score one summary; returns the result record as a dict.");

  m.def("score_batch",
        [](const std::vector<py::dict>& records, const qags::ScoringConfig& config,
           std::shared_ptr<qags::QgBackend> qg, std::shared_ptr<qags::QaBackend> qa, std::size_t jobs) {
          if (!qg) qg = std::make_shared<qags::TemplateQg>();
          if (!qa) qa = std::make_shared<qags::SpanMatchQa>();
          auto dumps = py::module_::import("json").attr("dumps");
          std::vector<qags::ScoringInstance> instances;
          for (const auto& r : records) {
            auto rec = qags::io::parse_input_record(nlohmann::json::parse(dumps(r).cast<std::string>()));
            qags::ScoringInstance inst{rec.id, rec.article, rec.summary, {}};
            if (rec.candidates) inst.candidates = qags::load_external_candidates(rec.summary, *rec.candidates);
            instances.push_back(std::move(inst));
          }
          std::vector<qags::QagsResult> results;
          {
            py::gil_scoped_release release;
            results = qags::score_batch(instances, config, *qg, *qa, jobs);
          }
          py::list out;
          for (const auto& r : results) out.append(to_python(qags::io::to_json(r)));
          return out;
        },
        py::arg("records"), py::arg("config") = qags::ScoringConfig{}, py::arg("qg") = nullptr,
        py::arg("qa") = nullptr, py::arg("jobs") = 1);

  m.def("pearson", [](const std::vector<double>& xs, const std::vector<double>& ys) { return qags::pearson(xs, ys); },
        py::arg("xs"), py::arg("ys"));
  m.def("human_score", [](const py::dict& d) { return qags::human_score(to_annotation_set(d)); }, py::arg("annotation"));
  m.def("krippendorff_alpha",
        [](const std::vector<py::dict>& sets) {
          std::vector<qags::AnnotationSet> parsed;
          for (const auto& d : sets) parsed.push_back(to_annotation_set(d));
          return qags::krippendorff_alpha(parsed);
        },
        py::arg("annotations"));
}

#include "qags/http_backend.hpp"

#include <semaphore>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "qags/errors.hpp"

namespace qags {

namespace {

using nlohmann::json;

struct Endpoint {
  std::string scheme_host_port;
  std::string path_prefix;
};

Endpoint parse_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw InvalidArgument("endpoint must look like http://host:port, got " + url);
  const auto slash = url.find('/', scheme + 3);
  Endpoint e;
  e.scheme_host_port = url.substr(0, slash);
  if (slash != std::string::npos) {
    e.path_prefix = url.substr(slash);
    while (!e.path_prefix.empty() && e.path_prefix.back() == '/') e.path_prefix.pop_back();
  }
  return e;
}

class InFlightSlot {
 public:
  explicit InFlightSlot(std::counting_semaphore<>& sem) : sem_(sem) { sem_.acquire(); }
  ~InFlightSlot() { sem_.release(); }
  InFlightSlot(const InFlightSlot&) = delete;
  InFlightSlot& operator=(const InFlightSlot&) = delete;

 private:
  std::counting_semaphore<>& sem_;
};

std::string server_error_message(const httplib::Result& res) {
  try {
    const auto body = json::parse(res->body);
    if (body.contains("error") && body["error"].is_string()) return body["error"].get<std::string>();
  } catch (const json::exception&) {
  }
  return res->body;
}

}  // namespace

struct HttpBackend::Impl {
  Endpoint endpoint;
  HttpClientOptions options;
  std::counting_semaphore<> in_flight;

  Impl(Endpoint e, HttpClientOptions o)
      : endpoint(std::move(e)), options(o), in_flight(std::max(1, o.max_in_flight)) {}

  httplib::Client make_client() const {
    httplib::Client client(endpoint.scheme_host_port);
    const auto ct = options.connect_timeout;
    const auto rt = options.read_timeout;
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(ct).count(),
                                  std::chrono::duration_cast<std::chrono::microseconds>(ct % std::chrono::seconds(1)).count());
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(rt).count(),
                            std::chrono::duration_cast<std::chrono::microseconds>(rt % std::chrono::seconds(1)).count());
    return client;
  }

  // Sends with retries on transport failure / 503. Returns the parsed 200 body.
  json call(const std::string& method, const std::string& path, const json* body) {
    const std::string full_path = endpoint.path_prefix + path;
    const httplib::Headers headers = {{kProtocolHeader, kProtocolVersion}};
    auto backoff = options.initial_backoff;
    std::string last_failure;
    for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
      httplib::Result res{nullptr, httplib::Error::Unknown};
      {
        InFlightSlot slot(in_flight);
        auto client = make_client();
        if (method == "GET") {
          res = client.Get(full_path, headers);
        } else {
          res = client.Post(full_path, headers, body->dump(), "application/json");
        }
      }
      if (!res) {
        last_failure = httplib::to_string(res.error());
        continue;
      }
      if (res->status == 503) {
        last_failure = "503 " + server_error_message(res);
        continue;
      }
      if (res->status != 200) {
        throw BackendRefused(endpoint.scheme_host_port + full_path + " returned " +
                             std::to_string(res->status) + ": " + server_error_message(res));
      }
      if (res->get_header_value(kProtocolHeader) != kProtocolVersion) {
        throw ProtocolError("response missing " + std::string(kProtocolHeader) + ": " + kProtocolVersion);
      }
      try {
        return json::parse(res->body);
      } catch (const json::parse_error& e) {
        throw ProtocolError(std::string("malformed JSON response: ") + e.what());
      }
    }
    throw BackendUnavailable(endpoint.scheme_host_port + full_path + " unreachable after " +
                             std::to_string(options.max_retries + 1) + " attempts: " + last_failure);
  }
};

HttpBackend::HttpBackend(std::string endpoint, HttpClientOptions options)
    : endpoint_(std::move(endpoint)),
      impl_(std::make_unique<Impl>(parse_endpoint(endpoint_), options)) {}

HttpBackend::~HttpBackend() = default;

QgResponse HttpBackend::generate(const QgRequest& request) const {
  const json body = {{"context", request.context},
                     {"answer", request.answer},
                     {"beam_width", request.beam_width},
                     {"min_len", request.min_len},
                     {"max_len", request.max_len}};
  const auto reply = impl_->call("POST", "/v1/questions", &body);
  QgResponse response;
  try {
    for (const auto& q : reply.at("questions")) {
      response.questions.push_back({q.at("text").get<std::string>(), q.at("log_prob").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed /v1/questions response: ") + e.what());
  }
  canonicalize(response, request.beam_width);
  return response;
}

QaResponse HttpBackend::answer(const QaRequest& request) const {
  const json body = {{"question", request.question}, {"context", request.context}};
  const auto reply = impl_->call("POST", "/v1/answers", &body);
  Answer answer;
  try {
    answer.confidence = reply.at("confidence").get<double>();
    const auto& a = reply.at("answer");
    if (!a.is_null()) {
      answer.span = SpanAnswer{a.at("text").get<std::string>(),
                               {a.at("start").get<std::size_t>(), a.at("end").get<std::size_t>()}};
    }
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed /v1/answers response: ") + e.what());
  }
  if (answer.span) {
    const auto slice = utf8::slice(request.context, answer.span->span);
    if (!slice || *slice != answer.span->text) {
      throw ProtocolError("server span does not reproduce answer text \"" + answer.span->text + "\"");
    }
  }
  return answer;
}

HealthStatus HttpBackend::health() const {
  const auto reply = impl_->call("GET", "/v1/health", nullptr);
  try {
    return {reply.at("status").get<std::string>(), reply.value("qg_model", ""), reply.value("qa_model", "")};
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("malformed /v1/health response: ") + e.what());
  }
}

}  // namespace qags

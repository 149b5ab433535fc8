#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "qags/backends.hpp"

namespace qags {

inline constexpr const char* kProtocolHeader = "X-QAGS-Protocol";
inline constexpr const char* kProtocolVersion = "1";

struct HttpClientOptions {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{100};
  int max_in_flight = 8;
  std::chrono::milliseconds connect_timeout{2000};
  std::chrono::milliseconds read_timeout{60000};
};

struct HealthStatus {
  std::string status;
  std::string qg_model;
  std::string qa_model;
};

// JSON-over-HTTP client for a remote model server. One instance per
// endpoint; shareable across threads, with at most max_in_flight requests
// outstanding at once.
class HttpBackend final : public QgBackend, public QaBackend {
 public:
  // endpoint: "http://host:port" (optionally with a path prefix).
  explicit HttpBackend(std::string endpoint, HttpClientOptions options = {});
  ~HttpBackend() override;

  HttpBackend(const HttpBackend&) = delete;
  HttpBackend& operator=(const HttpBackend&) = delete;

  QgResponse generate(const QgRequest& request) const override;
  QaResponse answer(const QaRequest& request) const override;
  HealthStatus health() const;
  std::string name() const override { return "http:" + endpoint_; }

  const std::string& endpoint() const { return endpoint_; }

 private:
  struct Impl;
  std::string endpoint_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace qags

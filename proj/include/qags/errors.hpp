#pragma once

#include <stdexcept>
#include <string>

namespace qags {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violations on public operations.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NoCandidates : public Error {
 public:
  NoCandidates() : Error("no answer candidates found in summary") {}
};

class SpanMismatch : public Error {
 public:
  using Error::Error;
};

// Base for everything a QG/QA backend can raise.
class BackendError : public Error {
 public:
  using Error::Error;
};

// Transport failure (connection refused, timeout, 503). Retryable.
class BackendUnavailable : public BackendError {
 public:
  using BackendError::BackendError;
};

// Malformed or invariant-violating response.
class ProtocolError : public BackendError {
 public:
  using BackendError::BackendError;
};

// Server understood the request and declined it. Not retried.
class BackendRefused : public BackendError {
 public:
  using BackendError::BackendError;
};

class AllGenerationsFailed : public BackendError {
 public:
  using BackendError::BackendError;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class EmptySummary : public Error {
 public:
  EmptySummary() : Error("annotation set has no sentences") {}
};

class MissingIds : public Error {
 public:
  using Error::Error;
};

}  // namespace qags

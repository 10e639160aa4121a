#pragma once

#include <stdexcept>
#include <string>

namespace taskforge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct InvalidInputError : Error {
  using Error::Error;
};

struct UnknownAppError : Error {
  using Error::Error;
};

struct SessionEndedError : Error {
  using Error::Error;
};

struct SnapshotError : Error {
  using Error::Error;
};

struct EnvError : Error {
  using Error::Error;
};

struct BackendError : Error {
  using Error::Error;
};

// Raised when the model endpoint rejects the request for context length;
// callers may truncate history and retry once.
struct ContextLengthError : BackendError {
  using BackendError::BackendError;
};

struct ReplayMissError : BackendError {
  using BackendError::BackendError;
};

struct FixtureConflictError : BackendError {
  using BackendError::BackendError;
};

struct ExtractionError : Error {
  using Error::Error;
};

struct GroundingError : Error {
  using Error::Error;
};

struct TranslationError : Error {
  using Error::Error;
};

struct EmptyPoolError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct StageDependencyError : Error {
  using Error::Error;
};

}  // namespace taskforge

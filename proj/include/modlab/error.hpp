#pragma once

#include <stdexcept>
#include <string>

namespace modlab {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates the corpus schema or an invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration (thresholds, k range, missing decisions, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A computation was asked for on data that cannot support it
/// (empty inputs, degenerate samples, insufficient overlap).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A pipeline stage was run before the stage producing its inputs.
class PrerequisiteError : public Error {
 public:
  PrerequisiteError(const std::string& what, std::string stage)
      : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace modlab

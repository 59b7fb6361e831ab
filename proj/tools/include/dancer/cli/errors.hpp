#pragma once

#include <string>

#include "dancer/errors.hpp"

namespace dancer::cli {

/// Malformed or inconsistent configuration; field() is the dotted JSON path
/// of the offending entry.
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string field, const std::string& what) : InvalidArgument(what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Artifact directory could not be written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Process exit codes.
enum ExitCode : int { ok = 0, config_error = 2, numerical_failure = 3, exponent_refusal = 4 };

}  // namespace dancer::cli

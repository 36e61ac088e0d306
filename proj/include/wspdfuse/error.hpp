#pragma once

#include <stdexcept>
#include <string>

namespace wspdfuse {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input data: bad dimensions, empty sets, duplicates, bad files.
class InputError : public Error {
 public:
  using Error::Error;
};

// Out-of-domain parameters (s <= 0, p < 1, stddev <= 0, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Violated algorithm precondition (splitting a singleton, overlapping pairs).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage failed; the message is prefixed with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace wspdfuse

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class DegenerateInitialization : public Error {
 public:
  using Error::Error;
};

class InvalidWindow : public Error {
 public:
  using Error::Error;
};

class InvalidFit : public Error {
 public:
  using Error::Error;
};

/// Raised when an orbit sits on (or numerically next to) the separatrix,
/// where the period diverges.
class SeparatrixError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// I/O failure while writing a checkpoint in the middle of a run.
class CheckpointError : public IoError {
 public:
  CheckpointError(const std::string& what, std::size_t step)
      : IoError("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string key, std::size_t line)
      : Error("line " + std::to_string(line) + ", key '" + key + "': " + what),
        key_(std::move(key)),
        line_(line) {}
  const std::string& key() const noexcept { return key_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string key_;
  std::size_t line_;
};

/// Pipeline failure tagged with the stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace hmf

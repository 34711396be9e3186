#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mprofile {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based; 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A sample failed validation (non-finite value).
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class TooShortError : public Error {
 public:
  using Error::Error;
};

/// Invalid run parameters (window length, exclusion zone, worker count...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint file is unreadable, corrupted, or belongs to another input.
class CheckpointError : public Error {
 public:
  using Error::Error;
};

/// A worker failed while traversing a segment; the message names it.
class WorkerFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace mprofile

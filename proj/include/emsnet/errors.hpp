#pragma once

#include <stdexcept>
#include <string>

namespace emsnet {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file or record. Carries enough context to name the
// offending file and record in CLI diagnostics.
class ParseError : public Error {
 public:
  ParseError(std::string source, long record, const std::string& what)
      : Error(format(source, record, what)), source_(std::move(source)), record_(record) {}

  const std::string& source() const { return source_; }
  long record() const { return record_; }

 private:
  static std::string format(const std::string& source, long record, const std::string& what) {
    std::string msg = source;
    if (record >= 0) {
      msg += ":" + std::to_string(record);
    }
    msg += ": " + what;
    return msg;
  }

  std::string source_;
  long record_;
};

// Semantic violation of a documented precondition or invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Out-of-range or inconsistent run configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Filesystem-level failure (missing file, unwritable path).
class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace emsnet

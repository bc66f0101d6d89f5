#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace matchpoint {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Direction code outside its legal range, or used in the wrong phase.
class EncodingError : public Error {
 public:
  using Error::Error;
};

// Context absent from a profile.
class LookupError : public Error {
 public:
  using Error::Error;
};

// Direction never observed in a context (zero marginal).
class UnsupportedDirection : public Error {
 public:
  using Error::Error;
};

// Profile cannot be built or fails validation.
class ProfileError : public Error {
 public:
  using Error::Error;
};

// Invalid MatchConfig, BatchConfig, agent spec or run config.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Illegal transition of the scoring or rally state machine.
class RulesError : public Error {
 public:
  using Error::Error;
};

// Input or output file cannot be opened.
class FileError : public Error {
 public:
  using Error::Error;
};

// Document violates a schema. path is a JSON pointer into the document.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& reason)
      : Error((path.empty() ? std::string("/") : path) + ": " + reason),
        path_(std::move(path)),
        reason_(reason) {}
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

// Rally string rejected by the charting grammar.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& reason)
      : Error("offset " + std::to_string(offset) + ": " + reason), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace matchpoint

#pragma once

#include <stdexcept>
#include <string>

namespace scenegen {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class OutOfRegion : public Error {
 public:
  explicit OutOfRegion(std::string object_id)
      : Error("object '" + object_id + "' lies outside its region"), object_id_(std::move(object_id)) {}
  const std::string& object_id() const { return object_id_; }

 private:
  std::string object_id_;
};

class VocabularyExhausted : public Error {
 public:
  VocabularyExhausted(std::size_t requested, std::size_t available)
      : Error("emoji vocabulary exhausted: " + std::to_string(requested) + " cells, " +
              std::to_string(available) + " names") {}
};

class DegenerateDirection : public Error {
 public:
  DegenerateDirection() : Error("object and anchor centers coincide") {}
};

// Oracle replies that cannot be turned into a decision. Each one consumes a
// search attempt; none of them aborts the search.
class ParseError : public Error {
 public:
  enum class Code { EmptyResponse, UnknownEmoji, WrongCount, NonContiguous, Malformed };

  ParseError(Code code, std::string message) : Error(std::move(message)), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

class UnknownCategory : public Error {
 public:
  explicit UnknownCategory(std::string category)
      : Error("unknown asset category '" + category + "'"), category_(std::move(category)) {}
  const std::string& category() const { return category_; }

 private:
  std::string category_;
};

class NotSupportable : public Error {
 public:
  explicit NotSupportable(const std::string& object_id)
      : Error("object '" + object_id + "' cannot support other objects") {}
};

class OracleFailure : public Error {
 public:
  using Error::Error;
};

class TransportError : public OracleFailure {
 public:
  TransportError(int status, const std::string& message)
      : OracleFailure("transport error (status " + std::to_string(status) + "): " + message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class FingerprintMiss : public OracleFailure {
 public:
  FingerprintMiss(std::string fingerprint, std::string query_text)
      : OracleFailure("no transcript record for query " + fingerprint + ":\n" + query_text),
        fingerprint_(std::move(fingerprint)),
        query_text_(std::move(query_text)) {}
  const std::string& fingerprint() const { return fingerprint_; }
  const std::string& query_text() const { return query_text_; }

 private:
  std::string fingerprint_;
  std::string query_text_;
};

class MissingTemplate : public Error {
 public:
  explicit MissingTemplate(const std::string& name) : Error("missing prompt template '" + name + "'") {}
};

class CompositionError : public Error {
 public:
  using Error::Error;
};

class MismatchedSeeds : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace scenegen

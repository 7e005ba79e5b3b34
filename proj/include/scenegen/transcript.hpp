#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "scenegen/oracle.hpp"
#include "scenegen/prompts.hpp"

namespace scenegen {

struct TranscriptMeta {
  std::string model;
  std::string timestamp;
  std::uint64_t seed = 0;

  friend bool operator==(const TranscriptMeta&, const TranscriptMeta&) = default;
};

struct TranscriptRecord {
  std::string fingerprint;
  std::string reply;

  friend bool operator==(const TranscriptRecord&, const TranscriptRecord&) = default;
};

/// JSON lines: a metadata line, then one {"fp", "reply"} line per query in
/// the order the queries were first asked.
struct Transcript {
  TranscriptMeta meta;
  std::vector<TranscriptRecord> records;

  std::string serialize() const;
  static Transcript parse(std::string_view text);
  static Transcript load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// Forwards to another oracle and keeps the first reply per fingerprint.
class RecordingOracle : public PlacementOracle {
 public:
  RecordingOracle(PlacementOracle& inner, PromptTemplates templates, TranscriptMeta meta);

  OracleReply query(const OracleQuery& query) override;
  Transcript transcript() const;

 private:
  PlacementOracle& inner_;
  PromptTemplates templates_;
  mutable std::mutex mutex_;
  Transcript transcript_;
  std::map<std::string, std::size_t> seen_;
};

/// Answers from a transcript. Throws FingerprintMiss for unseen queries.
class ReplayOracle : public PlacementOracle {
 public:
  ReplayOracle(const Transcript& transcript, PromptTemplates templates);

  OracleReply query(const OracleQuery& query) override;
  const TranscriptMeta& meta() const { return meta_; }

 private:
  PromptTemplates templates_;
  TranscriptMeta meta_;
  std::map<std::string, std::string> replies_;
};

}  // namespace scenegen

#include "scenegen/transcript.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "scenegen/error.hpp"

namespace scenegen {

std::string Transcript::serialize() const {
  std::string out = nlohmann::json{{"model", meta.model}, {"timestamp", meta.timestamp}, {"seed", meta.seed}}.dump();
  out += '\n';
  for (const auto& r : records) {
    out += nlohmann::json{{"fp", r.fingerprint}, {"reply", r.reply}}.dump();
    out += '\n';
  }
  return out;
}

Transcript Transcript::parse(std::string_view text) {
  Transcript t;
  std::istringstream in{std::string(text)};
  std::string line;
  bool first = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error("transcript line " + std::to_string(lineno) + " is not JSON");
    if (first) {
      t.meta.model = j.value("model", "");
      t.meta.timestamp = j.value("timestamp", "");
      t.meta.seed = j.value("seed", std::uint64_t{0});
      first = false;
      continue;
    }
    if (!j.contains("fp") || !j.contains("reply")) {
      throw Error("transcript line " + std::to_string(lineno) + " lacks fp/reply");
    }
    t.records.push_back({j["fp"].get<std::string>(), j["reply"].get<std::string>()});
  }
  if (first) throw Error("transcript is empty");
  return t;
}

Transcript Transcript::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open transcript " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Transcript::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write transcript " + path.string());
  out << serialize();
}

RecordingOracle::RecordingOracle(PlacementOracle& inner, PromptTemplates templates, TranscriptMeta meta)
    : inner_(inner), templates_(std::move(templates)) {
  transcript_.meta = std::move(meta);
}

OracleReply RecordingOracle::query(const OracleQuery& query) {
  const std::string fp = templates_.fingerprint(query);
  OracleReply reply = inner_.query(query);
  std::lock_guard lock(mutex_);
  if (!seen_.contains(fp)) {
    seen_.emplace(fp, transcript_.records.size());
    transcript_.records.push_back({fp, reply.text});
  }
  return reply;
}

Transcript RecordingOracle::transcript() const {
  std::lock_guard lock(mutex_);
  return transcript_;
}

ReplayOracle::ReplayOracle(const Transcript& transcript, PromptTemplates templates)
    : templates_(std::move(templates)), meta_(transcript.meta) {
  for (const auto& r : transcript.records) replies_.emplace(r.fingerprint, r.reply);
}

OracleReply ReplayOracle::query(const OracleQuery& query) {
  const std::string fp = templates_.fingerprint(query);
  auto it = replies_.find(fp);
  if (it == replies_.end()) throw FingerprintMiss(fp, templates_.canonical_text(query));
  return {kind_of(query), it->second};
}

}  // namespace scenegen

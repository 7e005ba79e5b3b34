#pragma once

#include <filesystem>
#include <string>

#include "scenegen/oracle.hpp"
#include "scenegen/prompts.hpp"

namespace scenegen {

/// Chat-completion endpoint settings. The API key is read from the
/// environment variable named by `api_key_env`, never from the file.
struct LiveConfig {
  std::string endpoint;  // e.g. https://api.example.com/v1/chat/completions
  std::string model;
  double temperature = 0.0;
  std::string api_key_env = "SCENEGEN_API_KEY";
  int timeout_seconds = 60;

  /// JSON object with keys endpoint, model, temperature, api_key_env, timeout_seconds.
  static LiveConfig load(const std::filesystem::path& path);
};

/// Sends each query as a chat-completion request and returns the first
/// choice's message content. A failed request is retried once; a second
/// failure raises TransportError.
class LiveOracle : public PlacementOracle {
 public:
  LiveOracle(LiveConfig config, PromptTemplates templates, std::string api_key);

  /// Reads the key from the environment. Throws ConfigError when unset.
  static LiveOracle from_env(LiveConfig config, PromptTemplates templates);

  OracleReply query(const OracleQuery& query) override;

  /// Request body for a query (exposed for tests).
  std::string request_body(const OracleQuery& query) const;

 private:
  LiveConfig config_;
  PromptTemplates templates_;
  std::string api_key_;
  std::string base_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace scenegen

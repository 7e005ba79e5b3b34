#include "scenegen/live_oracle.hpp"

#include <cstdlib>
#include <fstream>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"

#include "scenegen/error.hpp"

namespace scenegen {

LiveConfig LiveConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open live oracle config " + path.string());
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("live oracle config is not a JSON object");
  LiveConfig c;
  if (!j.contains("endpoint") || !j["endpoint"].is_string()) throw ConfigError("live oracle config lacks endpoint");
  if (!j.contains("model") || !j["model"].is_string()) throw ConfigError("live oracle config lacks model");
  c.endpoint = j["endpoint"].get<std::string>();
  c.model = j["model"].get<std::string>();
  c.temperature = j.value("temperature", 0.0);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
  return c;
}

LiveOracle::LiveOracle(LiveConfig config, PromptTemplates templates, std::string api_key)
    : config_(std::move(config)), templates_(std::move(templates)), api_key_(std::move(api_key)) {
  const std::string& url = config_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("endpoint must start with http:// or https://");
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("unsupported endpoint scheme '" + scheme + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  base_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
}

LiveOracle LiveOracle::from_env(LiveConfig config, PromptTemplates templates) {
  const char* key = std::getenv(config.api_key_env.c_str());
  if (!key || !*key) throw ConfigError("environment variable " + config.api_key_env + " is not set");
  return LiveOracle(std::move(config), std::move(templates), key);
}

std::string LiveOracle::request_body(const OracleQuery& query) const {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : templates_.render(query)) messages.push_back({{"role", m.role}, {"content", m.content}});
  return nlohmann::json{{"model", config_.model}, {"temperature", config_.temperature}, {"messages", messages}}
      .dump();
}

OracleReply LiveOracle::query(const OracleQuery& query) {
  const std::string body = request_body(query);
  httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
  int status = 0;
  std::string message;
  for (int attempt = 0; attempt < 2; ++attempt) {
    httplib::Client client(base_);
    client.set_connection_timeout(config_.timeout_seconds);
    client.set_read_timeout(config_.timeout_seconds);
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      status = 0;
      message = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      status = res->status;
      message = res->body.substr(0, 200);
      continue;
    }
    const auto j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded() || !j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
      throw OracleFailure("malformed chat-completion response");
    }
    const auto& msg = j["choices"][0].value("message", nlohmann::json::object());
    if (!msg.contains("content") || !msg["content"].is_string()) {
      throw OracleFailure("chat-completion response has no message content");
    }
    return {kind_of(query), msg["content"].get<std::string>()};
  }
  throw TransportError(status, message);
}

}  // namespace scenegen

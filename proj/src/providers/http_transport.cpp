#include "http_transport.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdlib>

#include "prefboard/core/error.hpp"

namespace prefboard::providers::detail {

ParsedUrl parse_base_url(const std::string& base_url) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) throw ValidationError("base_url needs a scheme: " + base_url);
  const auto path_start = base_url.find('/', scheme_end + 3);
  ParsedUrl url;
  if (path_start == std::string::npos) {
    url.origin = base_url;
  } else {
    url.origin = base_url.substr(0, path_start);
    url.path_prefix = base_url.substr(path_start);
    while (!url.path_prefix.empty() && url.path_prefix.back() == '/') url.path_prefix.pop_back();
  }
  return url;
}

namespace {
void set_timeout(httplib::Client& client, double seconds) {
  const auto whole = static_cast<time_t>(std::floor(seconds));
  const auto micros = static_cast<time_t>(std::llround((seconds - std::floor(seconds)) * 1e6));
  client.set_connection_timeout(whole, micros);
  client.set_read_timeout(whole, micros);
  client.set_write_timeout(whole, micros);
}
}  // namespace

nlohmann::json post_json(const ProviderConfig& config, const std::string& endpoint,
                         const nlohmann::json& body) {
  const ParsedUrl url = parse_base_url(config.base_url);
  httplib::Client client(url.origin);
  set_timeout(client, config.timeout_s);

  httplib::Headers headers;
  if (!config.api_key_env_var.empty()) {
    if (const char* key = std::getenv(config.api_key_env_var.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }
  const auto result =
      client.Post(url.path_prefix + endpoint, headers, body.dump(), "application/json");
  if (!result) {
    throw TransportError("POST " + endpoint + " failed: " + httplib::to_string(result.error()));
  }
  if (result->status >= 500) {
    throw TransportError("POST " + endpoint + " returned HTTP " + std::to_string(result->status));
  }
  if (result->status >= 400) {
    throw Error("POST " + endpoint + " returned HTTP " + std::to_string(result->status) + ": " +
                result->body);
  }
  try {
    return nlohmann::json::parse(result->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error("POST " + endpoint + " returned invalid JSON: " + e.what());
  }
}

}  // namespace prefboard::providers::detail

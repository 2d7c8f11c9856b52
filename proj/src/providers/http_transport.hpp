#pragma once

#include <string>

#include <json.hpp>

#include "prefboard/providers/provider_config.hpp"

namespace prefboard::providers::detail {

struct ParsedUrl {
  std::string origin;       // scheme://host[:port]
  std::string path_prefix;  // "" or "/v1"
};

ParsedUrl parse_base_url(const std::string& base_url);

/// One POST attempt. 5xx and socket failures raise TransportError (retryable);
/// 4xx and undecodable bodies raise Error.
nlohmann::json post_json(const ProviderConfig& config, const std::string& endpoint,
                         const nlohmann::json& body);

}  // namespace prefboard::providers::detail

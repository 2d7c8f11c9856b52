#include "prefboard/providers/chat.hpp"

#include "http_transport.hpp"
#include "prefboard/core/error.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::providers {

std::string chat_complete(ChatProvider& provider, const std::string& prompt,
                          const std::string& schema_hint) {
  if (text::trim(prompt).empty()) throw ValidationError("prompt is empty");
  std::string out = provider.complete(prompt, schema_hint);
  if (text::trim(out).empty()) throw Error("empty completion from " + provider.id());
  return out;
}

HttpChatProvider::HttpChatProvider(ProviderConfig config) : config_(std::move(config)) {
  config_.validate();
}

std::string HttpChatProvider::complete(const std::string& prompt, const std::string& schema_hint) {
  nlohmann::json body;
  body["model"] = config_.model_name;
  body["messages"] = nlohmann::json::array();
  if (!schema_hint.empty()) body["messages"].push_back({{"role", "system"}, {"content", schema_hint}});
  body["messages"].push_back({{"role", "user"}, {"content", prompt}});

  nlohmann::json response;
  int attempts = 0;
  try {
    run_with_retry(RetryPolicy::from(config_), "chat completion",
                   [&] { response = detail::post_json(config_, "/chat/completions", body); },
                   &attempts);
  } catch (...) {
    last_attempts_ = attempts;
    throw;
  }
  last_attempts_ = attempts;
  try {
    const auto& content = response.at("choices").at(0).at("message").at("content");
    return content.is_null() ? std::string() : content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed chat completion response: ") + e.what());
  }
}

MockChatProvider MockChatProvider::fixed(std::string id, std::string reply) {
  return MockChatProvider(std::move(id),
                          [reply = std::move(reply)](const std::string&, const std::string&) {
                            return reply;
                          });
}

std::string MockChatProvider::complete(const std::string& prompt, const std::string& schema_hint) {
  ++calls_;
  return responder_(prompt, schema_hint);
}

}  // namespace prefboard::providers

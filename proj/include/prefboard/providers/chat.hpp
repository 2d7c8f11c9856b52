#pragma once

#include <atomic>
#include <functional>
#include <string>

#include "prefboard/providers/provider_config.hpp"

namespace prefboard::providers {

/// Single-prompt chat completion. `schema_hint` describes the expected output
/// shape; HTTP providers send it as the system message, mocks dispatch on it.
class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string complete(const std::string& prompt, const std::string& schema_hint) = 0;
  virtual std::string id() const = 0;
};

/// Validates the prompt, calls the provider and rejects empty completions.
std::string chat_complete(ChatProvider& provider, const std::string& prompt,
                          const std::string& schema_hint);

/// POST {base_url}/chat/completions with {model, messages}; retried per config.
class HttpChatProvider final : public ChatProvider {
 public:
  explicit HttpChatProvider(ProviderConfig config);

  std::string complete(const std::string& prompt, const std::string& schema_hint) override;
  std::string id() const override { return "http:" + config_.model_name; }

  /// Attempts used by the most recent call.
  int last_attempts() const noexcept { return last_attempts_.load(); }

 private:
  ProviderConfig config_;
  std::atomic<int> last_attempts_{0};
};

/// Pure in-process provider backed by a function.
class MockChatProvider final : public ChatProvider {
 public:
  using Responder = std::function<std::string(const std::string& prompt, const std::string& schema_hint)>;

  MockChatProvider(std::string id, Responder responder)
      : id_(std::move(id)), responder_(std::move(responder)) {}

  /// Always answers `reply`.
  static MockChatProvider fixed(std::string id, std::string reply);

  std::string complete(const std::string& prompt, const std::string& schema_hint) override;
  std::string id() const override { return id_; }
  std::size_t calls() const noexcept { return calls_.load(); }

 private:
  std::string id_;
  Responder responder_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace prefboard::providers

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prefboard/leaderboard/dailybench.hpp"
#include "prefboard/providers/chat.hpp"

namespace prefboard::leaderboard {

inline constexpr std::string_view kResponseSchema = "chat_response";

struct StoredResponse {
  std::string text;
  std::string provider_id;
};

struct CollectionFailure {
  std::string query_id;
  std::string model;
  std::string message;
};

/// (query_id, model) -> response, at most one per key, plus the failures of
/// the most recent collection run.
class ResponseStore {
 public:
  bool has(const std::string& query_id, const std::string& model) const;
  const StoredResponse* find(const std::string& query_id, const std::string& model) const;
  /// Throws ValidationError when the key is already filled.
  void put(const std::string& query_id, const std::string& model, StoredResponse response);
  std::size_t size() const noexcept { return responses_.size(); }
  std::vector<std::string> models() const;

  const std::vector<CollectionFailure>& failures() const noexcept { return failures_; }
  void set_failures(std::vector<CollectionFailure> f) { failures_ = std::move(f); }

  void save(const std::filesystem::path& path) const;
  static ResponseStore load(const std::filesystem::path& path);

 private:
  std::map<std::pair<std::string, std::string>, StoredResponse> responses_;
  std::vector<CollectionFailure> failures_;
};

struct ModelEndpoint {
  std::string model;
  std::shared_ptr<providers::ChatProvider> chat;
};

struct CollectReport {
  std::size_t requested = 0;
  std::size_t collected = 0;
  std::size_t already_present = 0;
  std::vector<CollectionFailure> failures;
};

/// Renders the conversation turns into the prompt sent to a model.
std::string render_query_prompt(const BenchEntry& entry);

/// Fills every missing (query, model) cell. Provider errors are recorded as
/// failures and leave a gap; existing cells are never re-requested. Throws
/// Error naming the model when every request to one model failed.
CollectReport collect_responses(const Benchmark& bench, std::span<const ModelEndpoint> models,
                                ResponseStore& store, int parallelism = 1);

}  // namespace prefboard::leaderboard

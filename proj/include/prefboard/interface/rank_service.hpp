#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "prefboard/clustering/topic_tree.hpp"
#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/interface/score_cache.hpp"
#include "prefboard/leaderboard/snapshot.hpp"

namespace prefboard::interface {

/// A client error with a machine-readable code and structured details.
class RequestError : public ValidationError {
 public:
  RequestError(std::string code, const std::string& message, Json details = Json::object())
      : ValidationError(message), code_(std::move(code)), details_(std::move(details)) {}

  const std::string& code() const noexcept { return code_; }
  const Json& details() const noexcept { return details_; }

 private:
  std::string code_;
  Json details_;
};

struct RankRequest {
  std::vector<int> topic_leaf_ids;    // empty: all topics
  std::vector<std::string> criteria;  // empty: judge without criteria
  std::optional<std::string> judge_id;

  /// Throws RequestError on wrong types, unknown fields or blank criteria.
  static RankRequest from_json(const Json& j);
  Json to_json() const;
};

/// Everything the service reads. Loaded once and never modified.
struct ServiceState {
  clustering::TopicTree tree;
  leaderboard::Benchmark bench;
  leaderboard::ResponseStore store;
  std::string baseline;
  std::vector<std::string> models;
  /// The first judge is the default.
  std::vector<std::shared_ptr<judging::Judge>> judges;
  judging::SwapPolicy swap_policy = judging::SwapPolicy::swap_average;
  double tie_band = judging::kDefaultTieBand;
};

struct ServiceOptions {
  std::optional<std::filesystem::path> snapshot_dir;
  std::optional<std::filesystem::path> cache_file;
  int verify_percent = 0;
  /// Returns the created_at stamp; defaults to utc_timestamp().
  std::function<std::string()> clock;
};

/// SOURCE_DATE_EPOCH when set, else the current time; ISO-8601 UTC.
std::string utc_timestamp();

/// Digest of the benchmark and every response the service can read.
std::string dataset_hash(const leaderboard::Benchmark& bench, const leaderboard::ResponseStore& store,
                         const std::vector<std::string>& models);

class RankService {
 public:
  RankService(ServiceState state, ServiceOptions options = {});

  /// Criteria are canonicalized (and judged in canonical order). A snapshot
  /// whose content id was produced before is returned as first stored.
  leaderboard::LeaderboardSnapshot handle_rank(const RankRequest& request);
  leaderboard::LeaderboardSnapshot default_leaderboard();
  std::optional<leaderboard::LeaderboardSnapshot> snapshot(const std::string& id);

  Json topics_json() const;
  Json models_json() const;
  Json health_json() const;

  std::string default_judge_id() const { return judges_.front()->id(); }
  CacheStats cache_stats() const;
  void reset_cache_stats();

 private:
  CachingJudge& judge_for(const std::optional<std::string>& id);

  ServiceState state_;
  ServiceOptions options_;
  std::shared_ptr<ScoreCache> cache_;
  std::vector<std::shared_ptr<CachingJudge>> judges_;
  std::string dataset_hash_;
  std::mutex mutex_;
  std::map<std::string, leaderboard::LeaderboardSnapshot> snapshots_;
  std::optional<std::string> default_id_;
};

}  // namespace prefboard::interface

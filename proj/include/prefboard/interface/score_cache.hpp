#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "prefboard/judging/judge.hpp"

namespace prefboard::interface {

/// Trim, collapse whitespace, NFC, drop empties, sort. Case is kept.
std::vector<std::string> canonical_criteria(const std::vector<std::string>& criteria);

/// Hex digest of (judge id, canonical criteria, query id, sorted model pair).
/// The judge id already pins model weights or prompt template.
std::string cache_key(const std::string& judge_id, const std::vector<std::string>& criteria,
                      const std::string& query_id, const std::string& model_x,
                      const std::string& model_y);

/// Raw single-order probabilities for one key. `forward` is p_B with the
/// lexicographically smaller model shown as A; `reverse` the other order.
/// Swap averaging is recomputed from these, so a cached verdict and a fresh
/// one go through the same arithmetic on the same doubles.
struct CacheEntry {
  std::optional<double> forward;
  std::optional<double> reverse;
};

/// In-memory map, optionally mirrored to an append-only JSONL file. Safe for
/// concurrent use; the last write to a key wins (values agree by soundness).
class ScoreCache {
 public:
  ScoreCache() = default;
  /// Loads `path` if it exists and appends every new value to it.
  explicit ScoreCache(std::filesystem::path path);

  std::optional<double> get(const std::string& key, bool forward) const;
  void put(const std::string& key, bool forward, double prob_b);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, CacheEntry> entries_;
  std::optional<std::filesystem::path> path_;
};

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t uncacheable = 0;
  std::uint64_t invocations = 0;   // requests sent to the wrapped judge for scoring
  std::uint64_t verifications = 0;  // hits recomputed for spot checks
  std::uint64_t mismatches = 0;
};

/// Judge decorator consulting a ScoreCache. Requests lacking a query id or
/// model names bypass the cache. When verify_percent > 0, hits whose key
/// digest falls in the first verify_percent of 100 buckets are recomputed and
/// compared; a mismatch is logged and counted and the fresh value returned.
class CachingJudge final : public judging::Judge {
 public:
  CachingJudge(std::shared_ptr<judging::Judge> inner, std::shared_ptr<ScoreCache> cache,
               int verify_percent = 0);

  std::string id() const override { return id_; }
  double prob_b(const judging::JudgeRequest& request) override;
  std::vector<double> prob_b_batch(std::span<const judging::JudgeRequest> requests) override;

  CacheStats stats() const;
  void reset_stats();

 private:
  std::shared_ptr<judging::Judge> inner_;
  std::shared_ptr<ScoreCache> cache_;
  int verify_percent_;
  std::string id_;
  std::atomic<std::uint64_t> hits_{0}, misses_{0}, uncacheable_{0}, invocations_{0},
      verifications_{0}, mismatches_{0};
};

}  // namespace prefboard::interface

#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "prefboard/clustering/topic_tree.hpp"
#include "prefboard/core/types.hpp"

namespace prefboard::leaderboard {

struct BenchEntry {
  std::string query_id;
  int leaf_id = 0;
  std::vector<Turn> turns;

  bool operator==(const BenchEntry&) const = default;
};

struct Benchmark {
  std::string name;
  std::size_t per_topic = 6;
  std::uint64_t seed = 0;
  std::vector<BenchEntry> entries;

  /// Entries whose leaf is in `leaves`; all entries when `leaves` is empty.
  std::vector<BenchEntry> filtered(const std::set<int>& leaves) const;
  std::set<int> leaf_ids() const;

  bool operator==(const Benchmark&) const = default;
};

/// Seeded uniform sample without replacement of `per_topic` members from
/// every leaf (all members when the leaf is smaller), leaves in id order.
Benchmark build_dailybench(const clustering::TopicTree& tree, const InstanceIndex& instances,
                           std::size_t per_topic = 6, std::uint64_t seed = 0,
                           std::string name = "dailybench");

void save_benchmark(const std::filesystem::path& path, const Benchmark& bench);
Benchmark load_benchmark(const std::filesystem::path& path);

}  // namespace prefboard::leaderboard

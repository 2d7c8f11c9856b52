#include "prefboard/leaderboard/dailybench.hpp"

#include <algorithm>
#include <random>

#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"

namespace prefboard::leaderboard {

std::vector<BenchEntry> Benchmark::filtered(const std::set<int>& leaves) const {
  if (leaves.empty()) return entries;
  std::vector<BenchEntry> out;
  for (const auto& e : entries) {
    if (leaves.contains(e.leaf_id)) out.push_back(e);
  }
  return out;
}

std::set<int> Benchmark::leaf_ids() const {
  std::set<int> out;
  for (const auto& e : entries) out.insert(e.leaf_id);
  return out;
}

Benchmark build_dailybench(const clustering::TopicTree& tree, const InstanceIndex& instances,
                           std::size_t per_topic, std::uint64_t seed, std::string name) {
  if (tree.leaves.empty()) throw ValidationError("topic tree has no leaves");
  if (per_topic == 0) throw ValidationError("per_topic must be positive");
  Benchmark bench;
  bench.name = std::move(name);
  bench.per_topic = per_topic;
  bench.seed = seed;
  std::vector<const clustering::TopicNode*> leaves;
  for (const auto& leaf : tree.leaves) leaves.push_back(&leaf);
  std::sort(leaves.begin(), leaves.end(), [](auto* a, auto* b) { return a->id < b->id; });

  std::mt19937_64 rng(seed);
  for (const auto* leaf : leaves) {
    std::vector<std::string> members = leaf->member_ids;
    std::sort(members.begin(), members.end());
    const std::size_t take = std::min(per_topic, members.size());
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, members.size() - 1);
      std::swap(members[i], members[pick(rng)]);
    }
    members.resize(take);
    std::sort(members.begin(), members.end());
    for (const auto& id : members) {
      bench.entries.push_back({id, leaf->id, instances.at(id).turns});
    }
  }
  return bench;
}

void save_benchmark(const std::filesystem::path& path, const Benchmark& bench) {
  Json entries = Json::array();
  for (const auto& e : bench.entries) {
    Json turns = Json::array();
    for (const auto& t : e.turns) turns.push_back({{"role", t.role}, {"text", t.text}});
    entries.push_back({{"query_id", e.query_id}, {"leaf_id", e.leaf_id}, {"turns", turns}});
  }
  const Json j{{"name", bench.name},
               {"per_topic", bench.per_topic},
               {"seed", bench.seed},
               {"entries", entries}};
  write_file_atomic(path, dump_stable(j));
}

Benchmark load_benchmark(const std::filesystem::path& path) {
  try {
    const Json j = Json::parse(read_file(path));
    Benchmark b;
    b.name = j.at("name").get<std::string>();
    b.per_topic = j.at("per_topic").get<std::size_t>();
    b.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& e : j.at("entries")) {
      BenchEntry entry{e.at("query_id").get<std::string>(), e.at("leaf_id").get<int>(), {}};
      for (const auto& t : e.at("turns")) {
        entry.turns.push_back({t.at("role").get<std::string>(), t.at("text").get<std::string>()});
      }
      b.entries.push_back(std::move(entry));
    }
    return b;
  } catch (const Json::exception& e) {
    throw ValidationError("benchmark file " + path.string() + ": " + e.what());
  }
}

}  // namespace prefboard::leaderboard

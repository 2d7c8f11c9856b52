#include "prefboard/mining/noising.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "prefboard/core/error.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::mining {

namespace {

/// k distinct indices from [0, n) in random order (partial Fisher-Yates).
std::vector<std::size_t> choose(std::size_t n, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

SubsetTag tag_after(SubsetTag in, NoiseOp op) {
  if (in != SubsetTag::minus) return in;
  switch (op) {
    case NoiseOp::remove: return SubsetTag::minus_remove;
    case NoiseOp::add: return SubsetTag::minus_add;
    case NoiseOp::replace: return SubsetTag::minus_replace;
    case NoiseOp::none: break;
  }
  return in;
}

ConditionedSample stamped(const ConditionedSample& sample, NoiseOp op, std::uint64_t seed) {
  ConditionedSample out = sample;
  out.origin = SampleOrigin{op, seed, false};
  out.subset_tag = tag_after(sample.subset_tag, op);
  return out;
}

ConditionedSample unchanged(const ConditionedSample& sample, NoiseOp op, std::uint64_t seed) {
  ConditionedSample out = stamped(sample, op, seed);
  out.origin.not_noisable = true;
  return out;
}

}  // namespace

ConditionedSample noise_remove(const ConditionedSample& sample, std::uint64_t seed) {
  const std::size_t k = sample.criteria.items.size();
  if (k <= 1) return unchanged(sample, NoiseOp::remove, seed);
  std::mt19937_64 rng(seed);
  const std::size_t keep = std::uniform_int_distribution<std::size_t>(1, k - 1)(rng);
  auto idx = choose(k, keep, rng);
  std::sort(idx.begin(), idx.end());

  ConditionedSample out = stamped(sample, NoiseOp::remove, seed);
  const auto& src = sample.criteria;
  out.criteria.items.clear();
  out.criteria.cluster_ids.clear();
  for (auto i : idx) {
    out.criteria.items.push_back(src.items[i]);
    if (src.has_clusters()) out.criteria.cluster_ids.push_back(src.cluster_ids[i]);
  }
  return out;
}

ConditionedSample noise_add(const ConditionedSample& sample, const CriteriaSet& flipped,
                            std::span<const ClusteredCriterion> pool, std::uint64_t seed) {
  if (!flipped.has_clusters()) {
    throw ValidationError("noise_add needs cluster ids on the opposite criteria of " +
                          sample.sample_id());
  }
  const std::set<int> banned(flipped.cluster_ids.begin(), flipped.cluster_ids.end());
  const std::set<std::string> present(sample.criteria.items.begin(), sample.criteria.items.end());
  std::vector<const ClusteredCriterion*> eligible;
  std::set<std::string> seen;
  for (const auto& c : pool) {
    if (c.cluster_id == kUnassignedCluster || banned.contains(c.cluster_id)) continue;
    if (present.contains(c.text) || !seen.insert(c.text).second) continue;
    eligible.push_back(&c);
  }
  if (eligible.empty()) {
    throw ValidationError("no criterion outside the opposite side's clusters for " +
                          sample.sample_id());
  }
  std::mt19937_64 rng(seed);
  const std::size_t m =
      std::min<std::size_t>(std::uniform_int_distribution<std::size_t>(1, 3)(rng), eligible.size());
  const auto idx = choose(eligible.size(), m, rng);

  ConditionedSample out = stamped(sample, NoiseOp::add, seed);
  const bool clustered = sample.criteria.has_clusters();
  for (auto i : idx) {
    out.criteria.items.push_back(eligible[i]->text);
    if (clustered) out.criteria.cluster_ids.push_back(eligible[i]->cluster_id);
  }
  return out;
}

ConditionedSample noise_replace(const ConditionedSample& sample, const CriteriaSet& flipped,
                                std::uint64_t seed) {
  const std::size_t k = sample.criteria.items.size();
  if (k < 3 || flipped.items.empty()) return unchanged(sample, NoiseOp::replace, seed);
  std::mt19937_64 rng(seed);
  std::size_t r = std::uniform_int_distribution<std::size_t>(1, (k - 1) / 2)(rng);
  r = std::min(r, flipped.items.size());
  const auto positions = choose(k, r, rng);
  const auto sources = choose(flipped.items.size(), r, rng);

  ConditionedSample out = stamped(sample, NoiseOp::replace, seed);
  const bool clustered = sample.criteria.has_clusters() && flipped.has_clusters();
  if (!clustered) out.criteria.cluster_ids.clear();
  for (std::size_t j = 0; j < r; ++j) {
    out.criteria.items[positions[j]] = flipped.items[sources[j]];
    if (clustered) out.criteria.cluster_ids[positions[j]] = flipped.cluster_ids[sources[j]];
  }
  return out;
}

std::vector<ClusteredCriterion> criteria_pool(std::span<const ConditionedSample> samples) {
  std::set<std::pair<std::string, int>> all;
  for (const auto& s : samples) {
    if (!s.criteria.has_clusters()) continue;
    for (std::size_t i = 0; i < s.criteria.items.size(); ++i) {
      all.emplace(s.criteria.items[i], s.criteria.cluster_ids[i]);
    }
  }
  std::vector<ClusteredCriterion> out;
  out.reserve(all.size());
  for (const auto& [text, id] : all) out.push_back({text, id});
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, const std::string& sample_id, NoiseOp op) {
  return text::fnv1a64(std::to_string(base) + "|" + sample_id + "|" + std::string(to_string(op)));
}

ConditionedSample augment_sample(const ConditionedSample& sample, const CriteriaSet& flipped,
                                 std::span<const ClusteredCriterion> pool, std::uint64_t base_seed,
                                 std::size_t rotation) {
  const NoiseOp ops[] = {NoiseOp::remove, NoiseOp::add, NoiseOp::replace};
  const NoiseOp op = ops[rotation % 3];
  const auto id = sample.sample_id();
  ConditionedSample out;
  if (op == NoiseOp::remove) {
    out = noise_remove(sample, derive_seed(base_seed, id, op));
  } else if (op == NoiseOp::replace) {
    out = noise_replace(sample, flipped, derive_seed(base_seed, id, op));
  } else {
    try {
      out = noise_add(sample, flipped, pool, derive_seed(base_seed, id, op));
    } catch (const ValidationError&) {
      out = noise_remove(sample, derive_seed(base_seed, id, NoiseOp::remove));
    }
  }
  out.subset_tag = sample.subset_tag;
  return out;
}

}  // namespace prefboard::mining

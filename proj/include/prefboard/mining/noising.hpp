#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "prefboard/core/types.hpp"

namespace prefboard::mining {

struct ClusteredCriterion {
  std::string text;
  int cluster_id = kUnassignedCluster;
};

// All three perturbations keep instance_id and y_c. A minus-tagged input
// comes back tagged minus_<op>; other tags are kept. Each call draws from a
// generator seeded with `seed`, recorded in the result's origin.

/// Keeps a uniformly random subset of size uniform{1..k-1}, order preserved.
/// k = 1 returns the sample unchanged and flagged not_noisable.
ConditionedSample noise_remove(const ConditionedSample& sample, std::uint64_t seed);

/// Appends m ~ uniform{1,2,3} distinct criteria from pool clusters not used by
/// `flipped` (clamped to what is eligible). Throws ValidationError when no
/// pool entry is eligible or `flipped` has no cluster ids.
ConditionedSample noise_add(const ConditionedSample& sample, const CriteriaSet& flipped,
                            std::span<const ClusteredCriterion> pool, std::uint64_t seed);

/// Overwrites r ~ uniform{1..floor((k-1)/2)} random positions with distinct
/// items of `flipped` (r clamped to |flipped|). k < 3 returns the sample
/// unchanged and flagged not_noisable.
ConditionedSample noise_replace(const ConditionedSample& sample, const CriteriaSet& flipped,
                                std::uint64_t seed);

/// Every distinct (text, cluster) pair across the samples' criteria, sorted.
std::vector<ClusteredCriterion> criteria_pool(std::span<const ConditionedSample> samples);

/// Training-time perturbation: remove, add or replace by `rotation` mod 3,
/// seeded per sample. An add with no eligible pool entry falls back to
/// remove. The subset tag of the input is kept.
ConditionedSample augment_sample(const ConditionedSample& sample, const CriteriaSet& flipped,
                                 std::span<const ClusteredCriterion> pool, std::uint64_t base_seed,
                                 std::size_t rotation);

/// Stable per-sample seed: hash of (base seed, sample id, op).
std::uint64_t derive_seed(std::uint64_t base, const std::string& sample_id, NoiseOp op);

}  // namespace prefboard::mining

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "prefboard/core/types.hpp"
#include "prefboard/mining/extraction.hpp"

namespace prefboard::mining {

/// Turns one instance into its two criteria-conditioned samples:
/// (cA, y_c = 0) and (cB, y_c = 1). The sample whose side agrees with the
/// human label is tagged plus, the other minus; both of a tie are tagged train.
std::pair<ConditionedSample, ConditionedSample> derive_conditioned(
    const PreferenceInstance& instance, const ExtractionResult& extraction);

/// True when the criteria side agrees with the instance's human label.
bool agrees_with_label(const ConditionedSample& s) noexcept;

struct PlusMinus {
  std::vector<ConditionedSample> plus;
  std::vector<ConditionedSample> minus;
  std::vector<ConditionedSample> tie_pool;
};

PlusMinus partition_plus_minus(std::span<const ConditionedSample> samples);

/// Derives samples for every extraction, in extraction order.
std::vector<ConditionedSample> derive_all(const InstanceIndex& instances,
                                          std::span<const ExtractionResult> extractions);

}  // namespace prefboard::mining

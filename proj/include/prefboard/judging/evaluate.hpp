#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "prefboard/core/types.hpp"
#include "prefboard/judging/judge.hpp"

namespace prefboard::judging {

struct JudgmentRecord {
  std::string sample_id;
  std::string judge_id;
  std::string criteria_hash;
  double prob_b = 0.5;
  Preferred preferred = Preferred::tie;
  std::string order_used;  // "original" or "swap_average"
  int y_c = 0;
  bool correct = false;
};

struct AccuracyReport {
  double accuracy_pct = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::size_t ties = 0;
  std::vector<JudgmentRecord> records;
};

/// Judges every sample in its stored order (or swap-averaged when asked) and
/// scores the verdict against y_c: B is correct for y_c = 1, A for y_c = 0,
/// a tie is always wrong. Throws ValidationError on an empty subset.
AccuracyReport evaluate_accuracy(Judge& judge, std::span<const ConditionedSample> subset,
                                 const InstanceIndex& instances,
                                 SwapPolicy policy = SwapPolicy::none,
                                 double tie_band = kDefaultTieBand);

/// One JSON object per line.
void save_judgment_records(const std::filesystem::path& path,
                           std::span<const JudgmentRecord> records);
std::vector<JudgmentRecord> load_judgment_records(const std::filesystem::path& path);

}  // namespace prefboard::judging

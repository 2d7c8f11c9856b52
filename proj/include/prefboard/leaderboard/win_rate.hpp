#pragma once

#include <span>
#include <string>
#include <vector>

#include "prefboard/judging/judge.hpp"
#include "prefboard/leaderboard/dailybench.hpp"
#include "prefboard/leaderboard/responses.hpp"

namespace prefboard::leaderboard {

struct QueryVerdict {
  std::string query_id;
  double prob_b = 0.5;  // probability the candidate (shown as B) wins
  judging::Preferred preferred = judging::Preferred::tie;
};

struct WinRate {
  std::string model;
  double percent = 0.0;
  std::size_t wins = 0;
  std::size_t ties = 0;
  std::size_t losses = 0;
  std::size_t judged = 0;
  std::vector<std::string> skipped;  // queries lacking either response
  std::vector<QueryVerdict> verdicts;
};

/// Judges baseline (as A) against model (as B) on every query with both
/// responses; percent = 100 * (wins + ties / 2) / judged. Throws
/// ValidationError when nothing could be judged.
WinRate win_rate(const std::string& model, const std::string& baseline, judging::Judge& judge,
                 const std::vector<std::string>& criteria, std::span<const BenchEntry> queries,
                 const ResponseStore& store,
                 judging::SwapPolicy policy = judging::SwapPolicy::swap_average,
                 double tie_band = judging::kDefaultTieBand);

}  // namespace prefboard::leaderboard

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "prefboard/core/io.hpp"
#include "prefboard/judging/judge.hpp"
#include "prefboard/leaderboard/dailybench.hpp"
#include "prefboard/leaderboard/ranking.hpp"
#include "prefboard/leaderboard/responses.hpp"
#include "prefboard/leaderboard/win_rate.hpp"

namespace prefboard::leaderboard {

struct LeaderboardQuery {
  std::string baseline;
  std::vector<std::string> models;
  std::vector<std::string> criteria;  // empty: no criteria
  std::set<int> topic_filter;         // empty: every leaf
};

struct LeaderboardSnapshot {
  std::string id;
  std::string baseline;
  std::vector<std::string> criteria;
  std::string criteria_hash;
  std::vector<int> topic_filter;
  std::vector<RankedModel> rows;
  std::string judge_id;
  std::string swap_policy;
  double tie_band = judging::kDefaultTieBand;
  std::string benchmark;
  std::string created_at;
  /// Per model: counts and the per-query verdicts behind the win rate.
  std::map<std::string, WinRate> details;
};

/// Win rate of every model against the baseline on the (filtered) benchmark,
/// ranked. The snapshot id is a digest of everything except created_at.
LeaderboardSnapshot compute_leaderboard(const LeaderboardQuery& query, judging::Judge& judge,
                                        const Benchmark& bench, const ResponseStore& store,
                                        judging::SwapPolicy policy, double tie_band,
                                        std::string created_at);

Json to_json(const LeaderboardSnapshot& s);
LeaderboardSnapshot snapshot_from_json(const Json& j);
std::string snapshot_content_id(const LeaderboardSnapshot& s);

}  // namespace prefboard::leaderboard

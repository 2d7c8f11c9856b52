#pragma once

#include <map>
#include <string>
#include <vector>

namespace prefboard::leaderboard {

struct RankedModel {
  std::string model;
  double win_rate = 0.0;
  int rank = 0;

  bool operator==(const RankedModel&) const = default;
};

/// Descending by win rate with competition ranking: equal rates share the
/// smaller rank and the next rank skips (1, 1, 3). Equal rates are listed by
/// model name.
std::vector<RankedModel> rank_models(const std::map<std::string, double>& win_rates);

/// model -> rank.
std::map<std::string, int> rank_map(const std::vector<RankedModel>& ranking);

}  // namespace prefboard::leaderboard

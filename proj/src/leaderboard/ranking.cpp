#include "prefboard/leaderboard/ranking.hpp"

#include <algorithm>

namespace prefboard::leaderboard {

std::vector<RankedModel> rank_models(const std::map<std::string, double>& win_rates) {
  std::vector<RankedModel> out;
  for (const auto& [model, rate] : win_rates) out.push_back({model, rate, 0});
  // the map is name-ordered, so a stable sort keeps names ordered within ties
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.win_rate > b.win_rate; });
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].rank = (i > 0 && out[i].win_rate == out[i - 1].win_rate) ? out[i - 1].rank
                                                                    : static_cast<int>(i + 1);
  }
  return out;
}

std::map<std::string, int> rank_map(const std::vector<RankedModel>& ranking) {
  std::map<std::string, int> out;
  for (const auto& r : ranking) out.emplace(r.model, r.rank);
  return out;
}

}  // namespace prefboard::leaderboard

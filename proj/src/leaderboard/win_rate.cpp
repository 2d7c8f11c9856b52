#include "prefboard/leaderboard/win_rate.hpp"

#include "prefboard/core/error.hpp"

namespace prefboard::leaderboard {

WinRate win_rate(const std::string& model, const std::string& baseline, judging::Judge& judge,
                 const std::vector<std::string>& criteria, std::span<const BenchEntry> queries,
                 const ResponseStore& store, judging::SwapPolicy policy, double tie_band) {
  WinRate out;
  out.model = model;
  std::vector<judging::JudgeRequest> requests;
  std::vector<const BenchEntry*> judged;
  for (const auto& q : queries) {
    const auto* base = store.find(q.query_id, baseline);
    const auto* cand = store.find(q.query_id, model);
    if (base == nullptr || cand == nullptr) {
      out.skipped.push_back(q.query_id);
      continue;
    }
    requests.push_back({criteria, q.turns, base->text, cand->text, q.query_id, baseline, model});
    judged.push_back(&q);
  }
  if (requests.empty()) {
    throw ValidationError("no query has responses from both " + model + " and " + baseline);
  }
  const auto verdicts = judging::judge_batch(judge, requests, policy, tie_band);
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    const auto& v = verdicts[i];
    switch (v.preferred) {
      case judging::Preferred::b: ++out.wins; break;
      case judging::Preferred::a: ++out.losses; break;
      case judging::Preferred::tie: ++out.ties; break;
    }
    out.verdicts.push_back({judged[i]->query_id, v.prob_b, v.preferred});
  }
  out.judged = verdicts.size();
  out.percent = 100.0 * (static_cast<double>(out.wins) + 0.5 * static_cast<double>(out.ties)) /
                static_cast<double>(out.judged);
  return out;
}

}  // namespace prefboard::leaderboard

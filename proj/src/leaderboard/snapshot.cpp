#include "prefboard/leaderboard/snapshot.hpp"

#include "prefboard/core/error.hpp"
#include "prefboard/core/hash.hpp"

namespace prefboard::leaderboard {

LeaderboardSnapshot compute_leaderboard(const LeaderboardQuery& query, judging::Judge& judge,
                                        const Benchmark& bench, const ResponseStore& store,
                                        judging::SwapPolicy policy, double tie_band,
                                        std::string created_at) {
  if (query.models.empty()) throw ValidationError("no models to rank");
  if (query.baseline.empty()) throw ValidationError("no baseline model");
  const auto known = bench.leaf_ids();
  for (int t : query.topic_filter) {
    if (!known.contains(t)) throw ValidationError("unknown topic " + std::to_string(t));
  }
  const auto queries = bench.filtered(query.topic_filter);

  LeaderboardSnapshot s;
  s.baseline = query.baseline;
  s.criteria = query.criteria;
  s.criteria_hash = criteria_hash(query.criteria);
  s.topic_filter.assign(query.topic_filter.begin(), query.topic_filter.end());
  s.judge_id = judge.id();
  s.swap_policy = std::string(judging::to_string(policy));
  s.tie_band = tie_band;
  s.benchmark = bench.name;
  s.created_at = std::move(created_at);
  std::map<std::string, double> rates;
  for (const auto& model : query.models) {
    auto wr = win_rate(model, query.baseline, judge, query.criteria, queries, store, policy,
                       tie_band);
    rates[model] = wr.percent;
    s.details.emplace(model, std::move(wr));
  }
  s.rows = rank_models(rates);
  s.id = snapshot_content_id(s);
  return s;
}

namespace {

Json details_json(const WinRate& w) {
  Json verdicts = Json::array();
  for (const auto& v : w.verdicts) {
    verdicts.push_back({{"query_id", v.query_id},
                        {"prob_b", v.prob_b},
                        {"preferred", std::string(judging::to_string(v.preferred))}});
  }
  return {{"wins", w.wins},   {"ties", w.ties},         {"losses", w.losses},
          {"judged", w.judged}, {"skipped", w.skipped}, {"verdicts", verdicts}};
}

Json content_json(const LeaderboardSnapshot& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"model", r.model}, {"win_rate", r.win_rate}, {"rank", r.rank}});
  }
  Json details = Json::object();
  for (const auto& [model, w] : s.details) details[model] = details_json(w);
  return {{"baseline", s.baseline},         {"criteria", s.criteria},
          {"criteria_hash", s.criteria_hash}, {"topic_filter", s.topic_filter},
          {"rows", rows},                   {"judge_id", s.judge_id},
          {"swap_policy", s.swap_policy},   {"tie_band", s.tie_band},
          {"benchmark", s.benchmark},       {"details", details}};
}

}  // namespace

std::string snapshot_content_id(const LeaderboardSnapshot& s) {
  return sha256_hex(content_json(s).dump()).substr(0, 16);
}

Json to_json(const LeaderboardSnapshot& s) {
  Json j = content_json(s);
  j["id"] = s.id;
  j["created_at"] = s.created_at;
  return j;
}

LeaderboardSnapshot snapshot_from_json(const Json& j) {
  LeaderboardSnapshot s;
  s.id = j.at("id").get<std::string>();
  s.created_at = j.at("created_at").get<std::string>();
  s.baseline = j.at("baseline").get<std::string>();
  s.criteria = j.at("criteria").get<std::vector<std::string>>();
  s.criteria_hash = j.at("criteria_hash").get<std::string>();
  s.topic_filter = j.at("topic_filter").get<std::vector<int>>();
  for (const auto& r : j.at("rows")) {
    s.rows.push_back({r.at("model").get<std::string>(), r.at("win_rate").get<double>(),
                      r.at("rank").get<int>()});
  }
  s.judge_id = j.at("judge_id").get<std::string>();
  s.swap_policy = j.at("swap_policy").get<std::string>();
  s.tie_band = j.at("tie_band").get<double>();
  s.benchmark = j.value("benchmark", "");
  for (const auto& [model, d] : j.at("details").items()) {
    WinRate w;
    w.model = model;
    w.wins = d.at("wins").get<std::size_t>();
    w.ties = d.at("ties").get<std::size_t>();
    w.losses = d.at("losses").get<std::size_t>();
    w.judged = d.at("judged").get<std::size_t>();
    w.skipped = d.at("skipped").get<std::vector<std::string>>();
    for (const auto& v : d.at("verdicts")) {
      w.verdicts.push_back({v.at("query_id").get<std::string>(), v.at("prob_b").get<double>(),
                            judging::preferred_from_string(v.at("preferred").get<std::string>())});
    }
    for (const auto& r : s.rows) {
      if (r.model == model) w.percent = r.win_rate;
    }
    s.details.emplace(model, std::move(w));
  }
  return s;
}

}  // namespace prefboard::leaderboard

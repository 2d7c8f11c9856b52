#include "prefboard/interface/rank_service.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <set>

#include "prefboard/core/hash.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::interface {

namespace fs = std::filesystem;

RankRequest RankRequest::from_json(const Json& j) {
  if (!j.is_object()) throw RequestError("invalid_request", "request body must be a JSON object");
  static const std::set<std::string> known{"topic_leaf_ids", "criteria", "judge_id"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw RequestError("invalid_request", "unknown field " + key, {{"field", key}});
    }
  }
  RankRequest r;
  if (j.contains("topic_leaf_ids")) {
    const auto& t = j.at("topic_leaf_ids");
    if (!t.is_array()) throw RequestError("invalid_request", "topic_leaf_ids must be an array");
    for (const auto& v : t) {
      if (!v.is_number_integer()) {
        throw RequestError("invalid_request", "topic_leaf_ids must hold integers");
      }
      r.topic_leaf_ids.push_back(v.get<int>());
    }
  }
  if (j.contains("criteria")) {
    const auto& c = j.at("criteria");
    if (!c.is_array()) throw RequestError("invalid_request", "criteria must be an array");
    for (const auto& v : c) {
      if (!v.is_string() || text::trim(v.get<std::string>()).empty()) {
        throw RequestError("invalid_request", "criteria items must be non-empty strings");
      }
      r.criteria.push_back(v.get<std::string>());
    }
  }
  if (j.contains("judge_id") && !j.at("judge_id").is_null()) {
    if (!j.at("judge_id").is_string()) throw RequestError("invalid_request", "judge_id must be a string");
    r.judge_id = j.at("judge_id").get<std::string>();
  }
  return r;
}

Json RankRequest::to_json() const {
  Json j{{"topic_leaf_ids", topic_leaf_ids}, {"criteria", criteria}};
  if (judge_id) j["judge_id"] = *judge_id;
  return j;
}

std::string utc_timestamp() {
  std::time_t t = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch != nullptr && *epoch != '\0') {
    t = static_cast<std::time_t>(std::stoll(epoch));
  } else {
    t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string dataset_hash(const leaderboard::Benchmark& bench, const leaderboard::ResponseStore& store,
                         const std::vector<std::string>& models) {
  std::string bytes = "prefboard-dataset-v1\n" + bench.name + "\n";
  for (const auto& e : bench.entries) {
    bytes += e.query_id + "\t" + std::to_string(e.leaf_id) + "\n";
    for (const auto& m : models) {
      if (const auto* r = store.find(e.query_id, m)) {
        bytes += m + "\t" + std::to_string(r->text.size()) + ":" + r->text + "\n";
      }
    }
  }
  return sha256_hex(bytes);
}

RankService::RankService(ServiceState state, ServiceOptions options)
    : state_(std::move(state)), options_(std::move(options)) {
  if (state_.judges.empty()) throw ValidationError("the service needs at least one judge");
  if (state_.baseline.empty()) throw ValidationError("no baseline model configured");
  if (state_.models.empty()) throw ValidationError("no models configured");
  if (state_.bench.entries.empty()) throw ValidationError("the benchmark is empty");
  for (const auto& e : state_.bench.entries) {
    if (!state_.store.has(e.query_id, state_.baseline)) {
      throw ValidationError("baseline " + state_.baseline + " has no response for query " +
                            e.query_id);
    }
  }
  if (!options_.clock) options_.clock = utc_timestamp;
  cache_ = options_.cache_file ? std::make_shared<ScoreCache>(*options_.cache_file)
                               : std::make_shared<ScoreCache>();
  for (const auto& j : state_.judges) {
    judges_.push_back(std::make_shared<CachingJudge>(j, cache_, options_.verify_percent));
  }
  if (options_.snapshot_dir) fs::create_directories(*options_.snapshot_dir);
  dataset_hash_ = dataset_hash(state_.bench, state_.store, state_.models);
}

CachingJudge& RankService::judge_for(const std::optional<std::string>& id) {
  if (!id || id->empty()) return *judges_.front();
  for (auto& j : judges_) {
    if (j->id() == *id) return *j;
  }
  Json valid = Json::array();
  for (const auto& j : judges_) valid.push_back(j->id());
  throw RequestError("unknown_judge", "unknown judge " + *id, {{"valid_judge_ids", valid}});
}

leaderboard::LeaderboardSnapshot RankService::handle_rank(const RankRequest& request) {
  const auto leaves = state_.bench.leaf_ids();
  std::set<int> filter;
  for (int t : request.topic_leaf_ids) {
    if (!leaves.contains(t)) {
      throw RequestError("unknown_topic", "unknown topic id " + std::to_string(t),
                         {{"valid_topic_ids", std::vector<int>(leaves.begin(), leaves.end())}});
    }
    filter.insert(t);
  }
  if (state_.bench.filtered(filter).empty()) {
    throw RequestError("no_queries", "no benchmark queries in the selected topics");
  }
  auto& judge = judge_for(request.judge_id);

  leaderboard::LeaderboardQuery query{state_.baseline, state_.models,
                                      canonical_criteria(request.criteria), filter};
  auto snap = leaderboard::compute_leaderboard(query, judge, state_.bench, state_.store,
                                               state_.swap_policy, state_.tie_band,
                                               options_.clock());

  std::lock_guard lock(mutex_);
  if (const auto it = snapshots_.find(snap.id); it != snapshots_.end()) return it->second;
  if (options_.snapshot_dir) {
    const auto path = *options_.snapshot_dir / (snap.id + ".json");
    if (fs::exists(path)) {
      snap = leaderboard::snapshot_from_json(Json::parse(read_file(path)));
    } else {
      write_file_atomic(path, dump_stable(leaderboard::to_json(snap)));
    }
  }
  snapshots_.emplace(snap.id, snap);
  return snap;
}

leaderboard::LeaderboardSnapshot RankService::default_leaderboard() {
  {
    std::lock_guard lock(mutex_);
    if (default_id_) return snapshots_.at(*default_id_);
  }
  auto snap = handle_rank({});
  std::lock_guard lock(mutex_);
  default_id_ = snap.id;
  return snap;
}

std::optional<leaderboard::LeaderboardSnapshot> RankService::snapshot(const std::string& id) {
  std::lock_guard lock(mutex_);
  if (const auto it = snapshots_.find(id); it != snapshots_.end()) return it->second;
  // Ids are hex; anything else cannot name a file we wrote.
  if (id.empty() || id.find_first_not_of("0123456789abcdef") != std::string::npos) {
    return std::nullopt;
  }
  if (options_.snapshot_dir) {
    const auto path = *options_.snapshot_dir / (id + ".json");
    if (fs::exists(path)) {
      auto snap = leaderboard::snapshot_from_json(Json::parse(read_file(path)));
      snapshots_.emplace(id, snap);
      return snap;
    }
  }
  return std::nullopt;
}

Json RankService::topics_json() const {
  const auto counts = [&] {
    std::map<int, std::size_t> n;
    for (const auto& e : state_.bench.entries) ++n[e.leaf_id];
    return n;
  }();
  Json leaves = Json::array();
  for (const auto& l : state_.tree.leaves) {
    const auto it = counts.find(l.id);
    leaves.push_back({{"id", l.id},
                      {"summary", l.summary},
                      {"major_id", l.parent_id ? Json(*l.parent_id) : Json(nullptr)},
                      {"members", l.member_ids.size()},
                      {"queries", it == counts.end() ? 0 : it->second}});
  }
  Json majors = Json::array();
  for (const auto& m : state_.tree.majors) {
    Json children = Json::array();
    for (const auto& l : state_.tree.leaves) {
      if (l.parent_id && *l.parent_id == m.id) children.push_back(l.id);
    }
    majors.push_back({{"id", m.id}, {"summary", m.summary}, {"leaf_ids", children}});
  }
  return {{"leaves", leaves}, {"majors", majors}};
}

Json RankService::models_json() const {
  return {{"baseline", state_.baseline}, {"models", state_.models}};
}

Json RankService::health_json() const {
  return {{"status", "ok"}, {"judge_id", default_judge_id()}, {"dataset_hash", dataset_hash_}};
}

CacheStats RankService::cache_stats() const {
  CacheStats total;
  for (const auto& j : judges_) {
    const auto s = j->stats();
    total.hits += s.hits;
    total.misses += s.misses;
    total.uncacheable += s.uncacheable;
    total.invocations += s.invocations;
    total.verifications += s.verifications;
    total.mismatches += s.mismatches;
  }
  return total;
}

void RankService::reset_cache_stats() {
  for (auto& j : judges_) j->reset_stats();
}

}  // namespace prefboard::interface

#include "prefboard/interface/score_cache.hpp"

#include <algorithm>
#include <fstream>
#include <spdlog/spdlog.h>

#include "prefboard/core/error.hpp"
#include "prefboard/core/hash.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::interface {

namespace {

void append_field(std::string& out, const std::string& value) {
  out += std::to_string(value.size());
  out += ':';
  out += value;
  out += '\n';
}

struct Slot {
  std::string key;
  bool forward;
};

std::optional<Slot> slot_for(const std::string& judge_id, const judging::JudgeRequest& r) {
  if (r.query_id.empty() || r.model_a.empty() || r.model_b.empty()) return std::nullopt;
  return Slot{cache_key(judge_id, r.criteria, r.query_id, r.model_a, r.model_b),
              r.model_a <= r.model_b};
}

bool verify_bucket(const std::string& key, int percent) {
  if (percent <= 0) return false;
  // The key is hex; its first 8 digits are uniform.
  const auto v = std::stoull(key.substr(0, 8), nullptr, 16);
  return static_cast<int>(v % 100) < percent;
}

}  // namespace

std::vector<std::string> canonical_criteria(const std::vector<std::string>& criteria) {
  std::vector<std::string> out;
  out.reserve(criteria.size());
  for (const auto& c : criteria) {
    auto item = text::nfc(text::collapse_whitespace(c));
    if (!item.empty()) out.push_back(std::move(item));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string cache_key(const std::string& judge_id, const std::vector<std::string>& criteria,
                      const std::string& query_id, const std::string& model_x,
                      const std::string& model_y) {
  std::string bytes = "prefboard-score-v1\n";
  append_field(bytes, judge_id);
  const auto canon = canonical_criteria(criteria);
  append_field(bytes, std::to_string(canon.size()));
  for (const auto& c : canon) append_field(bytes, c);
  append_field(bytes, query_id);
  append_field(bytes, std::min(model_x, model_y));
  append_field(bytes, std::max(model_x, model_y));
  return sha256_hex(bytes);
}

ScoreCache::ScoreCache(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(*path_)) return;
  for (const auto& line : read_record_lines(*path_)) {
    try {
      const auto j = Json::parse(line.text);
      auto& e = entries_[j.at("key").get<std::string>()];
      const double p = j.at("prob_b").get<double>();
      if (j.at("order").get<std::string>() == "forward") {
        e.forward = p;
      } else {
        e.reverse = p;
      }
    } catch (const Json::exception& ex) {
      throw ParseError(ex.what(), line.number);
    }
  }
}

std::optional<double> ScoreCache::get(const std::string& key, bool forward) const {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return forward ? it->second.forward : it->second.reverse;
}

void ScoreCache::put(const std::string& key, bool forward, double prob_b) {
  std::lock_guard lock(mutex_);
  auto& e = entries_[key];
  (forward ? e.forward : e.reverse) = prob_b;
  if (path_) {
    std::ofstream out(*path_, std::ios::app);
    out << Json{{"key", key}, {"order", forward ? "forward" : "reverse"}, {"prob_b", prob_b}}.dump()
        << '\n';
    if (!out) throw Error("cannot append to score cache " + path_->string());
  }
}

std::size_t ScoreCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

CachingJudge::CachingJudge(std::shared_ptr<judging::Judge> inner,
                           std::shared_ptr<ScoreCache> cache, int verify_percent)
    : inner_(std::move(inner)), cache_(std::move(cache)), verify_percent_(verify_percent) {
  if (!inner_ || !cache_) throw ValidationError("caching judge needs a judge and a cache");
  if (verify_percent < 0 || verify_percent > 100) {
    throw ValidationError("verify_percent must be within 0..100");
  }
  id_ = inner_->id();
}

double CachingJudge::prob_b(const judging::JudgeRequest& request) {
  return prob_b_batch(std::span(&request, 1)).front();
}

std::vector<double> CachingJudge::prob_b_batch(std::span<const judging::JudgeRequest> requests) {
  std::vector<double> out(requests.size());
  std::vector<std::size_t> todo;
  std::vector<std::optional<Slot>> slots(requests.size());
  std::vector<std::size_t> verify;
  for (std::size_t i = 0; i < requests.size(); ++i) {
    slots[i] = slot_for(id_, requests[i]);
    if (!slots[i]) {
      ++uncacheable_;
      todo.push_back(i);
      continue;
    }
    if (auto hit = cache_->get(slots[i]->key, slots[i]->forward)) {
      ++hits_;
      out[i] = *hit;
      if (verify_bucket(slots[i]->key, verify_percent_)) verify.push_back(i);
    } else {
      ++misses_;
      todo.push_back(i);
    }
  }
  if (!todo.empty()) {
    std::vector<judging::JudgeRequest> batch;
    batch.reserve(todo.size());
    for (auto i : todo) batch.push_back(requests[i]);
    const auto fresh = inner_->prob_b_batch(batch);
    invocations_ += todo.size();
    for (std::size_t k = 0; k < todo.size(); ++k) {
      const auto i = todo[k];
      out[i] = fresh[k];
      if (slots[i]) cache_->put(slots[i]->key, slots[i]->forward, fresh[k]);
    }
  }
  if (!verify.empty()) {
    std::vector<judging::JudgeRequest> batch;
    for (auto i : verify) batch.push_back(requests[i]);
    const auto fresh = inner_->prob_b_batch(batch);
    verifications_ += verify.size();
    for (std::size_t k = 0; k < verify.size(); ++k) {
      const auto i = verify[k];
      if (fresh[k] != out[i]) {
        ++mismatches_;
        spdlog::error("score cache mismatch for key {}: cached {} fresh {}", slots[i]->key,
                      out[i], fresh[k]);
        out[i] = fresh[k];
        cache_->put(slots[i]->key, slots[i]->forward, fresh[k]);
      }
    }
  }
  return out;
}

CacheStats CachingJudge::stats() const {
  return {hits_.load(), misses_.load(), uncacheable_.load(),
          invocations_.load(), verifications_.load(), mismatches_.load()};
}

void CachingJudge::reset_stats() {
  hits_ = misses_ = uncacheable_ = invocations_ = verifications_ = mismatches_ = 0;
}

}  // namespace prefboard::interface

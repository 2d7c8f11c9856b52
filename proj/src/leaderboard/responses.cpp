#include "prefboard/leaderboard/responses.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/mining/extraction.hpp"

namespace prefboard::leaderboard {

bool ResponseStore::has(const std::string& query_id, const std::string& model) const {
  return responses_.contains({query_id, model});
}

const StoredResponse* ResponseStore::find(const std::string& query_id,
                                          const std::string& model) const {
  const auto it = responses_.find({query_id, model});
  return it == responses_.end() ? nullptr : &it->second;
}

void ResponseStore::put(const std::string& query_id, const std::string& model,
                        StoredResponse response) {
  if (response.text.empty()) throw ValidationError("refusing to store an empty response");
  if (!responses_.try_emplace({query_id, model}, std::move(response)).second) {
    throw ValidationError("response for (" + query_id + ", " + model + ") already stored");
  }
}

std::vector<std::string> ResponseStore::models() const {
  std::set<std::string> out;
  for (const auto& [key, r] : responses_) out.insert(key.second);
  return {out.begin(), out.end()};
}

void ResponseStore::save(const std::filesystem::path& path) const {
  std::string out;
  for (const auto& [key, r] : responses_) {
    out += Json{{"query_id", key.first}, {"model", key.second}, {"text", r.text},
                {"provider", r.provider_id}}
               .dump() +
           "\n";
  }
  for (const auto& f : failures_) {
    out += Json{{"query_id", f.query_id}, {"model", f.model}, {"failure", f.message}}.dump() + "\n";
  }
  write_file_atomic(path, out);
}

ResponseStore ResponseStore::load(const std::filesystem::path& path) {
  ResponseStore store;
  for (const auto& line : read_record_lines(path)) {
    try {
      const Json j = Json::parse(line.text);
      const auto q = j.at("query_id").get<std::string>();
      const auto m = j.at("model").get<std::string>();
      if (j.contains("failure")) {
        store.failures_.push_back({q, m, j.at("failure").get<std::string>()});
      } else {
        store.put(q, m, {j.at("text").get<std::string>(), j.value("provider", "")});
      }
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line.number);
    }
  }
  return store;
}

std::string render_query_prompt(const BenchEntry& entry) {
  if (entry.turns.size() == 1 && entry.turns.front().role == "user") {
    return entry.turns.front().text;
  }
  return mining::render_conversation(entry.turns) + "Assistant:";
}

CollectReport collect_responses(const Benchmark& bench, std::span<const ModelEndpoint> models,
                                ResponseStore& store, int parallelism) {
  struct Task {
    const BenchEntry* entry;
    const ModelEndpoint* endpoint;
  };
  CollectReport report;
  std::vector<Task> tasks;
  for (const auto& m : models) {
    if (!m.chat) throw ValidationError("no chat provider for model " + m.model);
    for (const auto& e : bench.entries) {
      ++report.requested;
      if (store.has(e.query_id, m.model)) {
        ++report.already_present;
      } else {
        tasks.push_back({&e, &m});
      }
    }
  }

  std::vector<std::optional<std::string>> results(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        results[i] = providers::chat_complete(*tasks[i].endpoint->chat,
                                              render_query_prompt(*tasks[i].entry),
                                              std::string(kResponseSchema));
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, parallelism)),
                                             std::max<std::size_t>(1, tasks.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  std::map<std::string, std::pair<std::size_t, std::size_t>> per_model;  // attempts, failures
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const auto& model = tasks[i].endpoint->model;
    auto& [attempts, failed] = per_model[model];
    ++attempts;
    if (results[i]) {
      store.put(tasks[i].entry->query_id, model, {*results[i], tasks[i].endpoint->chat->id()});
      ++report.collected;
    } else {
      ++failed;
      report.failures.push_back({tasks[i].entry->query_id, model, errors[i]});
      spdlog::warn("no response from {} for {}: {}", model, tasks[i].entry->query_id, errors[i]);
    }
  }
  store.set_failures(report.failures);
  for (const auto& [model, counts] : per_model) {
    if (counts.first > 0 && counts.first == counts.second) {
      throw Error("every request to model " + model + " failed (" +
                  std::to_string(counts.second) + " of " + std::to_string(counts.first) + ")");
    }
  }
  return report;
}

}  // namespace prefboard::leaderboard

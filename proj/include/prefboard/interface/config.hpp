#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "prefboard/clustering/topic_tree.hpp"
#include "prefboard/crm/train.hpp"
#include "prefboard/judging/judge.hpp"
#include "prefboard/providers/chat.hpp"
#include "prefboard/providers/embedding.hpp"
#include "prefboard/providers/provider_config.hpp"

namespace prefboard::interface {

/// "mock" uses the in-process backends, "http" an OpenAI-compatible endpoint.
struct ProviderSection {
  std::string kind = "mock";
  providers::ProviderConfig http;
  std::size_t dim = 64;  // embedding dimension (mock) or expected dimension (http, 0 = any)
};

struct AppConfig {
  std::uint64_t seed = 0;
  std::filesystem::path work_dir = "work";

  ProviderSection embedding;
  ProviderSection chat;

  clustering::TopicConfig topics;
  int criteria_passes = 2;
  std::size_t criteria_min_cluster_size = 5;

  double val_fraction = 0.1;
  bool augment_train = false;
  std::vector<int> holdout_topics;
  std::vector<int> holdout_criterion_classes;

  crm::TrainConfig train;
  std::string crm_mode = "pairwise_cls";

  judging::JudgeSpec judge{judging::JudgeKind::crm, "", judging::SwapPolicy::swap_average,
                           judging::kDefaultTieBand};
  judging::SwapPolicy eval_swap_policy = judging::SwapPolicy::none;

  std::string baseline;
  std::vector<std::string> models;
  std::size_t per_topic = 6;

  std::string host = "127.0.0.1";
  int port = 8080;
  int cache_verify_percent = 1;

  /// Artifact locations under work_dir.
  std::filesystem::path path(const std::string& name) const { return work_dir / name; }
};

/// INI file. Sections and keys:
///   [general] seed, work_dir
///   [embedding] / [chat] kind, base_url, model, api_key_env, timeout_s,
///       max_retries, parallelism, batch_size, dim
///   [clustering] target_dim, min_cluster_size, min_samples, reassign_threshold,
///       n_representatives, criteria_passes, criteria_min_cluster_size
///   [split] val_fraction, augment_train, holdout_topics, holdout_criterion_classes
///   [train] mode, learning_rate, batch_size, max_epochs, eval_every_steps,
///       patience, l2
///   [judge] kind, config, swap_policy, tie_band, eval_swap_policy
///   [leaderboard] baseline, models, per_topic
///   [server] host, port, cache_verify_percent
/// Lists are comma separated. Unknown keys are rejected.
AppConfig load_config(const std::filesystem::path& path);
AppConfig parse_config(const std::string& text);

std::shared_ptr<providers::Embedder> make_embedder(const ProviderSection& section);
std::shared_ptr<providers::ChatProvider> make_chat(const ProviderSection& section);

}  // namespace prefboard::interface

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "prefboard/clustering/topic_tree.hpp"
#include "prefboard/crm/train.hpp"
#include "prefboard/interface/config.hpp"
#include "prefboard/interface/rank_service.hpp"
#include "prefboard/judging/evaluate.hpp"
#include "prefboard/leaderboard/responses.hpp"
#include "prefboard/mining/extraction.hpp"
#include "prefboard/mining/splits.hpp"

namespace prefboard::interface {

// Pipeline steps. Each reads and writes fixed file names under
// config.work_dir so the CLI subcommands can run them one at a time.
namespace artifacts {
inline constexpr const char* kInstances = "instances.jsonl";
inline constexpr const char* kCriteria = "criteria.jsonl";
inline constexpr const char* kExtractionFailures = "extraction_failures.jsonl";
inline constexpr const char* kSamples = "samples.jsonl";
inline constexpr const char* kClusteredSamples = "samples_clustered.jsonl";
inline constexpr const char* kTopicTree = "topic_tree.json";
inline constexpr const char* kCriteriaTree = "criteria_tree.json";
inline constexpr const char* kSplits = "splits.json";
inline constexpr const char* kModel = "crm_model.json";
inline constexpr const char* kTrainLog = "train_log.json";
inline constexpr const char* kEvalReport = "eval_report.json";
inline constexpr const char* kJudgments = "judgments.jsonl";
inline constexpr const char* kBench = "bench.json";
inline constexpr const char* kResponses = "responses.jsonl";
inline constexpr const char* kSnapshots = "snapshots";
inline constexpr const char* kScoreCache = "score_cache.jsonl";
}  // namespace artifacts

/// Backends built from the config, shared by every step.
struct Backends {
  std::shared_ptr<providers::Embedder> embedder;
  std::shared_ptr<providers::ChatProvider> chat;

  static Backends from_config(const AppConfig& config);
};

/// Validates and normalizes a raw dataset file into instances.jsonl.
DatasetReport step_ingest(const AppConfig& config, const std::filesystem::path& input);

mining::ExtractionBatch step_extract(const AppConfig& config, providers::ChatProvider& chat);

std::vector<ConditionedSample> step_derive(const AppConfig& config);

/// Applies one perturbation to every minus sample of `input` (the flipped
/// criteria come from the instance's other sample) and writes `output`.
std::vector<ConditionedSample> step_noise(const AppConfig& config, NoiseOp op,
                                          const std::filesystem::path& input,
                                          const std::filesystem::path& output);

clustering::TopicTree step_cluster_topics(const AppConfig& config, providers::Embedder& embedder,
                                          providers::ChatProvider* chat,
                                          const std::optional<std::filesystem::path>& overrides = {});

/// Clusters the distinct criterion texts (leaves = detailed clusters, majors =
/// broad classes) and writes samples with cluster ids filled in. With too
/// few texts to reduce and cluster, every distinct text is its own cluster.
clustering::TopicTree step_cluster_criteria(const AppConfig& config,
                                            providers::Embedder& embedder,
                                            providers::ChatProvider* chat);

/// Topic and criterion-class labels from the saved trees.
mining::ClusterLabels cluster_labels(const AppConfig& config);

mining::SplitSet step_split(const AppConfig& config);

crm::TrainResult step_train(const AppConfig& config, providers::Embedder& embedder);

/// Accuracy of the configured judge on the named subsets (all non-empty
/// subsets when `subsets` is empty).
std::map<std::string, judging::AccuracyReport> step_eval(const AppConfig& config,
                                                         judging::Judge& judge,
                                                         const std::vector<std::string>& subsets);

leaderboard::Benchmark step_bench_build(const AppConfig& config);

/// Endpoints for the baseline and every configured model. Mock chat gives
/// graded verbosity: models[i] writes i + 1 filler sentences, the baseline
/// sits in the middle of that range.
std::vector<leaderboard::ModelEndpoint> model_endpoints(const AppConfig& config);

leaderboard::CollectReport step_collect(const AppConfig& config,
                                        std::span<const leaderboard::ModelEndpoint> endpoints);

/// Loads tree, benchmark, responses and the configured judge.
ServiceState load_service_state(const AppConfig& config, const Backends& backends);
ServiceOptions service_options(const AppConfig& config);

leaderboard::LeaderboardSnapshot step_rank(const AppConfig& config, const Backends& backends,
                                           const RankRequest& request);

}  // namespace prefboard::interface

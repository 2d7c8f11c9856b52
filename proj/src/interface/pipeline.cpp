#include "prefboard/interface/pipeline.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <set>

#include "prefboard/core/dataset.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/crm/train.hpp"
#include "prefboard/interface/mock_backends.hpp"
#include "prefboard/judging/judge.hpp"
#include "prefboard/leaderboard/dailybench.hpp"
#include "prefboard/mining/conditioning.hpp"
#include "prefboard/mining/extraction.hpp"
#include "prefboard/mining/noising.hpp"

namespace prefboard::interface {

namespace fs = std::filesystem;

namespace {

fs::path out_path(const AppConfig& c, const char* name) {
  fs::create_directories(c.work_dir);
  return c.path(name);
}

InstanceIndex load_instances(const AppConfig& c) {
  return InstanceIndex(load_preference_dataset(c.path(artifacts::kInstances)));
}

std::vector<ConditionedSample> load_samples_for_split(const AppConfig& c) {
  const auto clustered = c.path(artifacts::kClusteredSamples);
  return load_conditioned_samples(fs::exists(clustered) ? clustered : c.path(artifacts::kSamples));
}

}  // namespace

Backends Backends::from_config(const AppConfig& config) {
  return {make_embedder(config.embedding), make_chat(config.chat)};
}

DatasetReport step_ingest(const AppConfig& config, const fs::path& input) {
  const auto scan = scan_preference_dataset(input);
  for (const auto& e : scan.errors) spdlog::warn("{}:{}: {}", input.string(), e.line, e.message);
  if (scan.filtered_both_bad > 0) {
    spdlog::info("dropped {} records judged bad on both sides", scan.filtered_both_bad);
  }
  const auto report = validate_dataset(scan.instances);
  save_preference_dataset(out_path(config, artifacts::kInstances), scan.instances);
  spdlog::info("ingested {} instances ({} malformed lines skipped)", report.n_total,
               scan.errors.size());
  return report;
}

mining::ExtractionBatch step_extract(const AppConfig& config, providers::ChatProvider& chat) {
  const auto instances = load_preference_dataset(config.path(artifacts::kInstances));
  auto batch = mining::extract_all(instances, chat, config.chat.http.request_parallelism);
  mining::save_criteria_store(out_path(config, artifacts::kCriteria), batch.results);
  std::string failures;
  for (const auto& f : batch.failures) {
    failures += Json{{"instance_id", f.instance_id}, {"message", f.message}}.dump() + "\n";
  }
  write_file_atomic(config.path(artifacts::kExtractionFailures), failures);
  spdlog::info("extracted criteria for {} instances, {} failures", batch.results.size(),
               batch.failures.size());
  return batch;
}

std::vector<ConditionedSample> step_derive(const AppConfig& config) {
  const auto index = load_instances(config);
  const auto extractions = mining::load_criteria_store(config.path(artifacts::kCriteria));
  auto samples = mining::derive_all(index, extractions);
  save_conditioned_samples(out_path(config, artifacts::kSamples), samples);
  return samples;
}

std::vector<ConditionedSample> step_noise(const AppConfig& config, NoiseOp op,
                                          const fs::path& input, const fs::path& output) {
  if (op == NoiseOp::none) throw ValidationError("noise needs remove, add or replace");
  const auto samples = load_conditioned_samples(input);
  std::map<std::pair<std::string, Side>, const ConditionedSample*> by_key;
  for (const auto& s : samples) by_key[{s.instance_id, s.criteria.side}] = &s;
  const auto pool = mining::criteria_pool(samples);
  std::vector<ConditionedSample> out;
  for (const auto& s : samples) {
    if (s.subset_tag != SubsetTag::minus) continue;
    const auto seed = mining::derive_seed(config.seed, s.sample_id(), op);
    if (op == NoiseOp::remove) {
      out.push_back(mining::noise_remove(s, seed));
      continue;
    }
    const auto other = by_key.find({s.instance_id, opposite(s.criteria.side)});
    if (other == by_key.end()) {
      throw ValidationError("sample " + s.sample_id() + " has no counterpart to draw from");
    }
    out.push_back(op == NoiseOp::add ? mining::noise_add(s, other->second->criteria, pool, seed)
                                     : mining::noise_replace(s, other->second->criteria, seed));
  }
  save_conditioned_samples(output, out);
  return out;
}

clustering::TopicTree step_cluster_topics(const AppConfig& config, providers::Embedder& embedder,
                                          providers::ChatProvider* chat,
                                          const std::optional<fs::path>& overrides) {
  const auto index = load_instances(config);
  clustering::Corpus corpus;
  for (const auto& inst : index.all()) {
    corpus.ids.push_back(inst.id);
    corpus.texts.push_back(inst.query);
  }
  const auto override_map =
      overrides ? clustering::load_override_map(*overrides) : clustering::OverrideMap{};
  auto tree = clustering::build_topic_tree(corpus, embedder, chat, config.topics, override_map);
  clustering::save_topic_tree(out_path(config, artifacts::kTopicTree), tree);
  spdlog::info("topic tree: {} leaves, {} majors, {} outliers", tree.leaves.size(),
               tree.majors.size(), tree.outlier_ids.size());
  return tree;
}

clustering::TopicTree step_cluster_criteria(const AppConfig& config,
                                            providers::Embedder& embedder,
                                            providers::ChatProvider* chat) {
  auto samples = load_conditioned_samples(config.path(artifacts::kSamples));
  std::set<std::string> distinct;
  for (const auto& s : samples) distinct.insert(s.criteria.items.begin(), s.criteria.items.end());
  clustering::Corpus corpus;
  corpus.ids.assign(distinct.begin(), distinct.end());
  corpus.texts = corpus.ids;

  auto topic_config = config.topics;
  topic_config.min_cluster_size = config.criteria_min_cluster_size;
  clustering::TopicTree tree;
  if (corpus.texts.size() <
      std::max(2 * topic_config.min_cluster_size, topic_config.target_dim + 1)) {
    spdlog::warn("only {} distinct criteria; each becomes its own cluster", corpus.texts.size());
    for (std::size_t i = 0; i < corpus.texts.size(); ++i) {
      const int id = static_cast<int>(i);
      tree.leaves.push_back({id, clustering::TopicLevel::leaf, corpus.texts[i], {corpus.ids[i]}, {}, id});
      tree.majors.push_back({id, clustering::TopicLevel::major, corpus.texts[i], {corpus.ids[i]}, {}, std::nullopt});
    }
  } else {
    tree = clustering::build_topic_tree(corpus, embedder, chat, topic_config);
    if (config.criteria_passes == 1) {
      // One pass: broad classes are the detailed clusters themselves.
      tree.majors.clear();
      for (auto& leaf : tree.leaves) {
        leaf.parent_id = leaf.id;
        tree.majors.push_back({leaf.id, clustering::TopicLevel::major, leaf.summary, leaf.member_ids,
                               leaf.centroid, std::nullopt});
      }
    }
  }

  const auto leaf_of = tree.leaf_of_member();
  for (auto& s : samples) {
    s.criteria.cluster_ids.clear();
    for (const auto& item : s.criteria.items) {
      const auto it = leaf_of.find(item);
      s.criteria.cluster_ids.push_back(it == leaf_of.end() ? kUnassignedCluster : it->second);
    }
  }
  clustering::save_topic_tree(out_path(config, artifacts::kCriteriaTree), tree);
  save_conditioned_samples(config.path(artifacts::kClusteredSamples), samples);
  spdlog::info("criteria: {} distinct, {} clusters, {} classes", corpus.texts.size(),
               tree.leaves.size(), tree.majors.size());
  return tree;
}

mining::ClusterLabels cluster_labels(const AppConfig& config) {
  mining::ClusterLabels labels;
  const auto topics = clustering::load_topic_tree(config.path(artifacts::kTopicTree));
  labels.topic_of_instance = topics.leaf_of_member();
  for (const auto& l : topics.leaves) labels.known_topics.insert(l.id);
  for (const auto& id : topics.outlier_ids) {
    labels.topic_of_instance[id] = clustering::kNoise;
    labels.known_topics.insert(clustering::kNoise);
  }
  const auto criteria_path = config.path(artifacts::kCriteriaTree);
  if (fs::exists(criteria_path)) {
    const auto criteria = clustering::load_topic_tree(criteria_path);
    labels.class_of_cluster = criteria.major_of_leaf();
    for (const auto& m : criteria.majors) labels.known_classes.insert(m.id);
  }
  return labels;
}

mining::SplitSet step_split(const AppConfig& config) {
  const auto samples = load_samples_for_split(config);
  const auto labels = cluster_labels(config);
  const mining::HoldoutSpec holdout{config.holdout_topics, config.holdout_criterion_classes};
  const mining::SplitOptions options{config.seed, config.val_fraction, config.augment_train};
  auto splits = mining::make_splits(samples, labels, holdout, options);
  mining::save_split_manifest(out_path(config, artifacts::kSplits), splits);
  for (const auto& [name, subset] : splits.named()) {
    if (!subset->empty()) spdlog::info("split {}: {} samples", name, subset->size());
  }
  return splits;
}

crm::TrainResult step_train(const AppConfig& config, providers::Embedder& embedder) {
  const auto index = load_instances(config);
  const auto splits = mining::load_split_manifest(config.path(artifacts::kSplits));
  if (splits.train.empty()) throw ValidationError("the training split is empty");
  const auto mode = crm::crm_mode_from_string(config.crm_mode);
  crm::Featurizer featurizer(embedder);
  auto train_set = crm::build_train_set(mode, featurizer, splits.train, index);
  crm::TrainSet val_set;
  if (splits.val.empty()) {
    std::tie(train_set, val_set) = crm::hold_out(train_set, 0.1, config.seed);
  } else {
    val_set = crm::build_train_set(mode, featurizer, splits.val, index);
  }
  auto train_config = config.train;
  train_config.seed = config.seed;
  auto result = crm::train(train_set, val_set, train_config, embedder.dim(), embedder.id());
  crm::save_model(out_path(config, artifacts::kModel), result.model);

  Json log{{"evals", Json::array()}, {"epoch_objective", result.epoch_objective},
           {"train_accuracy", crm::accuracy(result.model.weights, train_set)},
           {"val_accuracy", crm::accuracy(result.model.weights, val_set)}};
  for (const auto& e : result.evals) {
    log["evals"].push_back({{"step", e.step}, {"epoch", e.epoch}, {"val_loss", e.val_loss}});
  }
  write_file_atomic(config.path(artifacts::kTrainLog), dump_stable(log));
  return result;
}

std::map<std::string, judging::AccuracyReport> step_eval(const AppConfig& config,
                                                         judging::Judge& judge,
                                                         const std::vector<std::string>& subsets) {
  const auto index = load_instances(config);
  const auto splits = mining::load_split_manifest(config.path(artifacts::kSplits));
  std::vector<std::string> names = subsets;
  if (names.empty()) {
    for (const auto& [name, subset] : splits.named()) {
      if (!subset->empty() && name != "train") names.push_back(name);
    }
  }
  std::map<std::string, judging::AccuracyReport> out;
  Json report = Json::object();
  std::vector<judging::JudgmentRecord> records;
  for (const auto& name : names) {
    auto r = judging::evaluate_accuracy(judge, splits.by_name(name), index,
                                        config.eval_swap_policy, config.judge.tie_band);
    report[name] = {{"accuracy_pct", r.accuracy_pct},
                    {"correct", r.correct},
                    {"total", r.total},
                    {"ties", r.ties}};
    spdlog::info("{}: {:.2f}% ({}/{})", name, r.accuracy_pct, r.correct, r.total);
    records.insert(records.end(), r.records.begin(), r.records.end());
    out.emplace(name, std::move(r));
  }
  write_file_atomic(out_path(config, artifacts::kEvalReport),
                    dump_stable({{"judge_id", judge.id()}, {"subsets", report}}));
  judging::save_judgment_records(config.path(artifacts::kJudgments), records);
  return out;
}

leaderboard::Benchmark step_bench_build(const AppConfig& config) {
  const auto index = load_instances(config);
  const auto tree = clustering::load_topic_tree(config.path(artifacts::kTopicTree));
  auto bench = leaderboard::build_dailybench(tree, index, config.per_topic, config.seed);
  leaderboard::save_benchmark(out_path(config, artifacts::kBench), bench);
  spdlog::info("benchmark: {} queries over {} topics", bench.entries.size(),
               bench.leaf_ids().size());
  return bench;
}

std::vector<leaderboard::ModelEndpoint> model_endpoints(const AppConfig& config) {
  if (config.baseline.empty()) throw ValidationError("no baseline model configured");
  std::vector<std::string> names{config.baseline};
  for (const auto& m : config.models) {
    if (m != config.baseline) names.push_back(m);
  }
  std::vector<leaderboard::ModelEndpoint> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::shared_ptr<providers::ChatProvider> chat;
    if (config.chat.kind == "mock") {
      const auto pos = std::find(config.models.begin(), config.models.end(), names[i]);
      const int verbosity = pos == config.models.end()
                                ? static_cast<int>(config.models.size() + 1) / 2
                                : static_cast<int>(pos - config.models.begin()) + 1;
      chat = make_model_chat(names[i], verbosity);
    } else {
      auto http = config.chat.http;
      http.model_name = names[i];
      http.validate();
      chat = std::make_shared<providers::HttpChatProvider>(http);
    }
    out.push_back({names[i], std::move(chat)});
  }
  return out;
}

leaderboard::CollectReport step_collect(const AppConfig& config,
                                        std::span<const leaderboard::ModelEndpoint> endpoints) {
  const auto bench = leaderboard::load_benchmark(config.path(artifacts::kBench));
  const auto path = config.path(artifacts::kResponses);
  auto store = fs::exists(path) ? leaderboard::ResponseStore::load(path) : leaderboard::ResponseStore{};
  auto report = leaderboard::collect_responses(bench, endpoints, store,
                                               config.chat.http.request_parallelism);
  store.save(path);
  spdlog::info("collected {} responses ({} already present, {} failures)", report.collected,
               report.already_present, report.failures.size());
  return report;
}

ServiceState load_service_state(const AppConfig& config, const Backends& backends) {
  ServiceState state;
  state.tree = clustering::load_topic_tree(config.path(artifacts::kTopicTree));
  state.bench = leaderboard::load_benchmark(config.path(artifacts::kBench));
  state.store = leaderboard::ResponseStore::load(config.path(artifacts::kResponses));
  state.baseline = config.baseline;
  for (const auto& m : config.models) {
    if (m != config.baseline) state.models.push_back(m);
  }
  state.judges.push_back(judging::make_judge(config.judge, backends.embedder, backends.chat));
  state.swap_policy = config.judge.swap_policy;
  state.tie_band = config.judge.tie_band;
  return state;
}

ServiceOptions service_options(const AppConfig& config) {
  ServiceOptions o;
  o.snapshot_dir = config.path(artifacts::kSnapshots);
  o.cache_file = config.path(artifacts::kScoreCache);
  o.verify_percent = config.cache_verify_percent;
  return o;
}

leaderboard::LeaderboardSnapshot step_rank(const AppConfig& config, const Backends& backends,
                                           const RankRequest& request) {
  RankService service(load_service_state(config, backends), service_options(config));
  return service.handle_rank(request);
}

}  // namespace prefboard::interface

// Command-line driver for the pipeline steps and the HTTP service.

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <csignal>
#include <iostream>
#include <random>

#include "prefboard/core/dataset.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/crm/grad_check.hpp"
#include "prefboard/interface/config.hpp"
#include "prefboard/interface/http_server.hpp"
#include "prefboard/interface/pipeline.hpp"
#include "prefboard/interface/rank_service.hpp"
#include "prefboard/synthetic/generators.hpp"

namespace pb = prefboard;
namespace pi = prefboard::interface;

namespace {

pi::HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

void print_snapshot(const pb::leaderboard::LeaderboardSnapshot& s) {
  std::cout << "snapshot " << s.id << "  baseline " << s.baseline << "  judge " << s.judge_id
            << "\n";
  for (const auto& r : s.rows) {
    std::printf("%3d  %-32s %6.1f\n", r.rank, r.model.c_str(), r.win_rate);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prefboard: criteria-steered model leaderboards"};
  app.require_subcommand(1);
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string work_dir;
  bool verbose = false;
  app.add_option("--config", config_path, "INI config file");
  app.add_option("--seed", seed, "Override the configured seed");
  app.add_option("--work-dir", work_dir, "Override the artifact directory");
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string input;
  auto* ingest = app.add_subcommand("ingest", "Validate a preference dataset into the work dir");
  ingest->add_option("input", input, "Line-delimited dataset")->required()->check(CLI::ExistingFile);

  auto* extract = app.add_subcommand("extract", "Extract criteria for every instance");
  auto* derive = app.add_subcommand("derive", "Derive criteria-conditioned samples");

  std::string op_name;
  std::string noise_in, noise_out;
  auto* noise = app.add_subcommand("noise", "Perturb the minus samples of a file");
  noise->add_option("--op", op_name, "remove, add or replace")->required();
  noise->add_option("--input", noise_in)->required()->check(CLI::ExistingFile);
  noise->add_option("--output", noise_out)->required();

  std::string overrides;
  auto* cluster_topics = app.add_subcommand("cluster-topics", "Build the topic tree from queries");
  cluster_topics->add_option("--overrides", overrides, "Leaf -> major label JSON")
      ->check(CLI::ExistingFile);
  auto* cluster_criteria = app.add_subcommand("cluster-criteria", "Cluster criterion texts");
  auto* split = app.add_subcommand("split", "Build train/val and held-out subsets");
  auto* train = app.add_subcommand("train", "Train the conditioned reward model");

  std::vector<std::string> subsets;
  auto* eval = app.add_subcommand("eval", "Accuracy of the configured judge per subset");
  eval->add_option("--subset", subsets, "Subset names (default: all non-empty)");

  auto* bench_build = app.add_subcommand("bench-build", "Sample the benchmark from the topic tree");
  auto* collect = app.add_subcommand("collect", "Collect model responses for the benchmark");

  std::vector<int> topics;
  std::vector<std::string> criteria;
  std::string judge_id;
  auto* rank = app.add_subcommand("rank", "Compute a leaderboard snapshot");
  rank->add_option("--topic", topics, "Leaf topic ids (default: all)");
  rank->add_option("--criterion", criteria, "Preference criteria (repeatable)");
  rank->add_option("--judge", judge_id, "Judge id (default: configured)");

  auto* serve = app.add_subcommand("serve", "Serve the HTTP API");

  std::size_t n_check = 8;
  auto* grad = app.add_subcommand("grad-check", "Finite-difference check of both CRM losses");
  grad->add_option("--samples", n_check, "Training examples to check");

  std::string synth_kind = "corpus";
  std::string synth_out;
  std::size_t synth_n = 40;
  auto* synth = app.add_subcommand("synthetic", "Write a synthetic preference dataset");
  synth->add_option("--kind", synth_kind, "corpus (planted topics) or planted (criteria suite)")
      ->check(CLI::IsMember({"corpus", "planted"}));
  synth->add_option("--size", synth_n, "Per topic (corpus) or samples (planted)");
  synth->add_option("output", synth_out)->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    auto config = config_path.empty() ? pi::AppConfig{} : pi::load_config(config_path);
    if (seed) config.seed = *seed;
    config.train.seed = config.seed;
    if (!work_dir.empty()) {
      const bool default_model = config.judge.config == config.path("crm_model.json").string();
      config.work_dir = work_dir;
      if (default_model) config.judge.config = config.path("crm_model.json").string();
    }

    if (*synth) {
      std::vector<pb::PreferenceInstance> instances;
      if (synth_kind == "corpus") {
        instances = pb::synthetic::topic_corpus(synth_n, config.seed).instances;
      } else {
        instances = pb::synthetic::planted_suite(synth_n, config.seed).instances.all();
      }
      pb::save_preference_dataset(synth_out, instances);
      std::cout << instances.size() << " instances written to " << synth_out << "\n";
      return 0;
    }
    if (*ingest) {
      const auto r = pi::step_ingest(config, input);
      std::printf("instances %zu  win %.1f%%  tie %.1f%%  lose %.1f%%  turns %.2f\n", r.n_total,
                  r.win_pct, r.tie_pct, r.lose_pct, r.avg_turns);
      return 0;
    }
    const auto backends = pi::Backends::from_config(config);
    if (*extract) {
      pi::step_extract(config, *backends.chat);
    } else if (*derive) {
      std::cout << pi::step_derive(config).size() << " samples\n";
    } else if (*noise) {
      const auto out = pi::step_noise(config, pb::noise_op_from_string(op_name), noise_in, noise_out);
      std::cout << out.size() << " perturbed samples\n";
    } else if (*cluster_topics) {
      pi::step_cluster_topics(config, *backends.embedder, backends.chat.get(),
                              overrides.empty() ? std::nullopt
                                                : std::optional<std::filesystem::path>(overrides));
    } else if (*cluster_criteria) {
      pi::step_cluster_criteria(config, *backends.embedder, backends.chat.get());
    } else if (*split) {
      pi::step_split(config);
    } else if (*train) {
      const auto r = pi::step_train(config, *backends.embedder);
      std::printf("best step %ld  val loss %.6f  epochs %d%s\n", r.model.meta.best_step,
                  r.model.meta.best_val_loss, r.model.meta.epochs_run,
                  r.model.meta.early_stopped ? "  (early stop)" : "");
    } else if (*eval) {
      auto judge = pb::judging::make_judge(config.judge, backends.embedder, backends.chat);
      for (const auto& [name, r] : pi::step_eval(config, *judge, subsets)) {
        std::printf("%-12s %6.2f%%  (%zu/%zu, %zu ties)\n", name.c_str(), r.accuracy_pct,
                    r.correct, r.total, r.ties);
      }
    } else if (*bench_build) {
      pi::step_bench_build(config);
    } else if (*collect) {
      const auto endpoints = pi::model_endpoints(config);
      pi::step_collect(config, endpoints);
    } else if (*rank) {
      pi::RankRequest req;
      req.topic_leaf_ids = topics;
      req.criteria = criteria;
      if (!judge_id.empty()) req.judge_id = judge_id;
      print_snapshot(pi::step_rank(config, backends, req));
    } else if (*serve) {
      pi::RankService service(pi::load_service_state(config, backends), pi::service_options(config));
      pi::HttpServer server(service);
      const int port = server.bind(config.host, config.port);
      service.default_leaderboard();
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      spdlog::info("serving on {}:{}", config.host, port);
      server.listen();
    } else if (*grad) {
      const auto index = pb::InstanceIndex(pb::load_preference_dataset(config.path(pi::artifacts::kInstances)));
      const auto splits = pb::mining::load_split_manifest(config.path(pi::artifacts::kSplits));
      pb::crm::Featurizer featurizer(*backends.embedder);
      const std::span<const pb::ConditionedSample> all(splits.train);
      const auto head = all.first(std::min(n_check, all.size()));
      for (auto mode : {pb::crm::CrmMode::pairwise_cls, pb::crm::CrmMode::pointwise_ranking}) {
        const auto set = pb::crm::build_train_set(mode, featurizer, head, index);
        std::mt19937_64 rng(config.seed);
        std::normal_distribution<double> normal(0.0, 0.1);
        std::vector<double> w(set.feature_length());
        for (auto& x : w) x = normal(rng);
        double worst = 0.0;
        for (std::size_t i = 0; i < set.size(); ++i) {
          worst = std::max(worst, pb::crm::grad_check(w, set, i, config.train.l2).max_rel_error);
        }
        std::printf("%-18s max relative error %.3e over %zu examples\n",
                    std::string(pb::crm::to_string(mode)).c_str(), worst, set.size());
      }
    }
  } catch (const pb::Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}

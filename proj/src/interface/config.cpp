#include "prefboard/interface/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <map>
#include <set>
#include <sstream>

#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/core/text.hpp"
#include "prefboard/interface/mock_backends.hpp"

namespace prefboard::interface {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"general", {"seed", "work_dir"}},
      {"embedding",
       {"kind", "base_url", "model", "api_key_env", "timeout_s", "max_retries", "parallelism",
        "batch_size", "dim"}},
      {"chat",
       {"kind", "base_url", "model", "api_key_env", "timeout_s", "max_retries", "parallelism",
        "batch_size", "dim"}},
      {"clustering",
       {"target_dim", "min_cluster_size", "min_samples", "reassign_threshold",
        "n_representatives", "criteria_passes", "criteria_min_cluster_size"}},
      {"split", {"val_fraction", "augment_train", "holdout_topics", "holdout_criterion_classes"}},
      {"train",
       {"mode", "learning_rate", "batch_size", "max_epochs", "eval_every_steps", "patience", "l2"}},
      {"judge", {"kind", "config", "swap_policy", "tie_band", "eval_swap_policy"}},
      {"leaderboard", {"baseline", "models", "per_topic"}},
      {"server", {"host", "port", "cache_verify_percent"}},
  };
  return keys;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = text::trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split_list(s)) out.push_back(std::stoi(item));
  return out;
}

// ptree::get with a default swallows conversion errors; a present but
// malformed value must fail instead.
template <typename T>
T get_or(const pt::ptree& tree, const std::string& path, T fallback) {
  if (!tree.get_optional<std::string>(path)) return fallback;
  return tree.get<T>(path);
}

void read_provider(const pt::ptree& tree, const std::string& section, ProviderSection& out) {
  const auto node = tree.get_child_optional(section);
  if (!node) return;
  out.kind = get_or(*node, "kind", out.kind);
  out.http.base_url = get_or(*node, "base_url", out.http.base_url);
  out.http.model_name = get_or(*node, "model", out.http.model_name);
  out.http.api_key_env_var = get_or(*node, "api_key_env", out.http.api_key_env_var);
  out.http.timeout_s = get_or(*node, "timeout_s", out.http.timeout_s);
  out.http.max_retries = get_or(*node, "max_retries", out.http.max_retries);
  out.http.request_parallelism = get_or(*node, "parallelism", out.http.request_parallelism);
  out.http.batch_size = get_or(*node, "batch_size", out.http.batch_size);
  out.dim = get_or(*node, "dim", out.dim);
  if (out.kind != "mock" && out.kind != "http") {
    throw ValidationError("[" + section + "] kind must be mock or http");
  }
}

}  // namespace

AppConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.message(), e.line());
  }
  for (const auto& [section, node] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ValidationError("unknown config section [" + section + "]");
    for (const auto& [key, value] : node) {
      if (!it->second.contains(key)) {
        throw ValidationError("unknown config key " + section + "." + key);
      }
    }
  }

  AppConfig c;
  try {
    c.seed = get_or(tree, "general.seed", c.seed);
    c.work_dir = get_or(tree, "general.work_dir", c.work_dir.string());
    read_provider(tree, "embedding", c.embedding);
    read_provider(tree, "chat", c.chat);

    auto& t = c.topics;
    t.target_dim = get_or(tree, "clustering.target_dim", t.target_dim);
    t.min_cluster_size = get_or(tree, "clustering.min_cluster_size", t.min_cluster_size);
    t.min_samples = get_or(tree, "clustering.min_samples", t.min_samples);
    t.reassign_threshold = get_or(tree, "clustering.reassign_threshold", t.reassign_threshold);
    t.n_representatives = get_or(tree, "clustering.n_representatives", t.n_representatives);
    c.criteria_passes = get_or(tree, "clustering.criteria_passes", c.criteria_passes);
    c.criteria_min_cluster_size =
        get_or(tree, "clustering.criteria_min_cluster_size", c.criteria_min_cluster_size);

    c.val_fraction = get_or(tree, "split.val_fraction", c.val_fraction);
    c.augment_train = get_or(tree, "split.augment_train", c.augment_train);
    c.holdout_topics = int_list(get_or(tree, "split.holdout_topics", std::string()));
    c.holdout_criterion_classes =
        int_list(get_or(tree, "split.holdout_criterion_classes", std::string()));

    auto& tr = c.train;
    c.crm_mode = get_or(tree, "train.mode", c.crm_mode);
    tr.learning_rate = get_or(tree, "train.learning_rate", tr.learning_rate);
    tr.batch_size = get_or(tree, "train.batch_size", tr.batch_size);
    tr.max_epochs = get_or(tree, "train.max_epochs", tr.max_epochs);
    tr.eval_every_steps = get_or(tree, "train.eval_every_steps", tr.eval_every_steps);
    tr.patience = get_or(tree, "train.patience", tr.patience);
    tr.l2 = get_or(tree, "train.l2", tr.l2);

    c.judge.kind = judging::judge_kind_from_string(get_or(tree, "judge.kind", std::string("crm")));
    c.judge.config = get_or(tree, "judge.config", c.judge.config);
    c.judge.swap_policy =
        judging::swap_policy_from_string(get_or(tree, "judge.swap_policy", std::string("swap_average")));
    c.judge.tie_band = get_or(tree, "judge.tie_band", c.judge.tie_band);
    c.eval_swap_policy =
        judging::swap_policy_from_string(get_or(tree, "judge.eval_swap_policy", std::string("none")));

    c.baseline = get_or(tree, "leaderboard.baseline", c.baseline);
    c.models = split_list(get_or(tree, "leaderboard.models", std::string()));
    c.per_topic = get_or(tree, "leaderboard.per_topic", c.per_topic);

    c.host = get_or(tree, "server.host", c.host);
    c.port = get_or(tree, "server.port", c.port);
    c.cache_verify_percent = get_or(tree, "server.cache_verify_percent", c.cache_verify_percent);
  } catch (const pt::ptree_bad_data& e) {
    throw ValidationError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("bad config list: ") + e.what());
  }
  c.train.seed = c.seed;
  c.train.validate();
  if (c.judge.kind == judging::JudgeKind::crm && c.judge.config.empty()) {
    c.judge.config = c.path("crm_model.json").string();
  }
  c.judge.validate();
  if (c.criteria_passes < 1 || c.criteria_passes > 2) {
    throw ValidationError("criteria_passes must be 1 or 2");
  }
  if (c.cache_verify_percent < 0 || c.cache_verify_percent > 100) {
    throw ValidationError("cache_verify_percent must be within 0..100");
  }
  return c;
}

AppConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

std::shared_ptr<providers::Embedder> make_embedder(const ProviderSection& section) {
  if (section.kind == "mock") return std::make_shared<providers::MockEmbedder>(section.dim);
  section.http.validate();
  return std::make_shared<providers::CachingEmbedder>(
      std::make_shared<providers::HttpEmbedder>(section.http, section.dim));
}

std::shared_ptr<providers::ChatProvider> make_chat(const ProviderSection& section) {
  if (section.kind == "mock") return make_mock_chat();
  section.http.validate();
  return std::make_shared<providers::HttpChatProvider>(section.http);
}

}  // namespace prefboard::interface

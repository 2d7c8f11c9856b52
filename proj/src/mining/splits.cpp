#include "prefboard/mining/splits.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/mining/conditioning.hpp"
#include "prefboard/mining/noising.hpp"

namespace prefboard::mining {

namespace {

constexpr int kManifestVersion = 1;

struct InstanceSamples {
  const ConditionedSample* a = nullptr;
  const ConditionedSample* b = nullptr;
};

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

/// Appends the perturbed variants of `minus`, falling back to an unchanged
/// flagged copy when a perturbation has nothing to work with.
void add_variants(const ConditionedSample& minus, const ConditionedSample& plus,
                  std::span<const ClusteredCriterion> pool, std::uint64_t seed,
                  std::vector<ConditionedSample>& removed, std::vector<ConditionedSample>& added,
                  std::vector<ConditionedSample>& replaced) {
  const auto id = minus.sample_id();
  removed.push_back(noise_remove(minus, derive_seed(seed, id, NoiseOp::remove)));
  const auto add_seed = derive_seed(seed, id, NoiseOp::add);
  try {
    added.push_back(noise_add(minus, plus.criteria, pool, add_seed));
  } catch (const ValidationError&) {
    auto copy = minus;
    copy.origin = SampleOrigin{NoiseOp::add, add_seed, true};
    copy.subset_tag = SubsetTag::minus_add;
    added.push_back(std::move(copy));
  }
  replaced.push_back(noise_replace(minus, plus.criteria, derive_seed(seed, id, NoiseOp::replace)));
}

}  // namespace

int modal_class(const CriteriaSet& c, const std::map<int, int>& class_of_cluster) {
  if (!c.has_clusters()) return kUnassignedCluster;
  std::map<int, int> votes;
  for (int cluster : c.cluster_ids) {
    if (cluster == kUnassignedCluster) continue;
    const auto it = class_of_cluster.find(cluster);
    ++votes[it == class_of_cluster.end() ? cluster : it->second];
  }
  int best = kUnassignedCluster;
  int best_votes = 0;
  for (const auto& [cls, n] : votes) {  // ascending ids, so ties keep the lowest
    if (n > best_votes) {
      best = cls;
      best_votes = n;
    }
  }
  return best;
}

SplitSet make_splits(std::span<const ConditionedSample> samples, const ClusterLabels& labels,
                     const HoldoutSpec& holdout, const SplitOptions& options) {
  for (int t : holdout.topics) {
    if (!labels.known_topics.contains(t)) {
      throw ValidationError("holdout names unknown topic " + std::to_string(t));
    }
  }
  for (int c : holdout.criterion_classes) {
    if (!labels.known_classes.contains(c)) {
      throw ValidationError("holdout names unknown criterion class " + std::to_string(c));
    }
  }
  if (options.val_fraction < 0.0 || options.val_fraction >= 1.0) {
    throw ValidationError("val_fraction must be in [0, 1)");
  }

  std::map<std::string, InstanceSamples> by_instance;
  for (const auto& s : samples) {
    s.validate();
    auto& slot = by_instance[s.instance_id];
    auto*& side = s.criteria.side == Side::a_preferred ? slot.a : slot.b;
    if (side != nullptr) {
      throw ValidationError("duplicate sample " + s.sample_id());
    }
    side = &s;
  }
  const auto pool = criteria_pool(samples);

  SplitSet out;
  out.holdout = holdout;
  out.options = options;
  std::vector<std::string> remainder;
  for (const auto& [id, pair] : by_instance) {
    if (pair.a == nullptr || pair.b == nullptr) {
      throw ValidationError("instance " + id + " lacks one of its two samples");
    }
    const auto topic = labels.topic_of_instance.find(id);
    if (topic == labels.topic_of_instance.end()) {
      throw ValidationError("instance " + id + " has no topic label");
    }
    const bool t_held = contains(holdout.topics, topic->second);
    const bool c_held =
        !t_held && (contains(holdout.criterion_classes,
                             modal_class(pair.a->criteria, labels.class_of_cluster)) ||
                    contains(holdout.criterion_classes,
                             modal_class(pair.b->criteria, labels.class_of_cluster)));
    if (!t_held && !c_held) {
      remainder.push_back(id);
      continue;
    }
    if (pair.a->instance_label == Label::tie) {
      out.excluded_ties.push_back(id);
      continue;
    }
    ConditionedSample plus = agrees_with_label(*pair.a) ? *pair.a : *pair.b;
    ConditionedSample minus = agrees_with_label(*pair.a) ? *pair.b : *pair.a;
    plus.subset_tag = SubsetTag::plus;
    minus.subset_tag = SubsetTag::minus;
    if (t_held) {
      add_variants(minus, plus, pool, options.seed, out.t_minus_remove, out.t_minus_add,
                   out.t_minus_replace);
      out.t_plus.push_back(std::move(plus));
      out.t_minus.push_back(std::move(minus));
    } else {
      add_variants(minus, plus, pool, options.seed, out.c_minus_remove, out.c_minus_add,
                   out.c_minus_replace);
      out.c_plus.push_back(std::move(plus));
      out.c_minus.push_back(std::move(minus));
    }
  }

  std::mt19937_64 rng(options.seed);
  std::shuffle(remainder.begin(), remainder.end(), rng);
  const auto n_val = static_cast<std::size_t>(
      std::lround(static_cast<double>(remainder.size()) * options.val_fraction));
  std::set<std::string> val_ids(remainder.begin(), remainder.begin() + static_cast<long>(n_val));
  const std::set<std::string> kept(remainder.begin(), remainder.end());
  std::size_t rotation = 0;
  for (const auto& [id, pair] : by_instance) {
    if (!kept.contains(id)) continue;
    const bool is_val = val_ids.contains(id);
    for (const ConditionedSample* s : {pair.a, pair.b}) {
      ConditionedSample copy = *s;
      copy.subset_tag = is_val ? SubsetTag::val : SubsetTag::train;
      if (is_val) {
        out.val.push_back(std::move(copy));
        continue;
      }
      if (options.augment_train) {
        const ConditionedSample* other = s == pair.a ? pair.b : pair.a;
        out.train.push_back(augment_sample(copy, other->criteria, pool, options.seed, rotation++));
      }
      out.train.push_back(std::move(copy));
    }
  }
  return out;
}

std::vector<std::pair<std::string, const std::vector<ConditionedSample>*>> SplitSet::named()
    const {
  return {{"train", &train},
          {"val", &val},
          {"T+", &t_plus},
          {"T-", &t_minus},
          {"T-_remove", &t_minus_remove},
          {"T-_add", &t_minus_add},
          {"T-_replace", &t_minus_replace},
          {"C+", &c_plus},
          {"C-", &c_minus},
          {"C-_remove", &c_minus_remove},
          {"C-_add", &c_minus_add},
          {"C-_replace", &c_minus_replace}};
}

const std::vector<ConditionedSample>& SplitSet::by_name(const std::string& name) const {
  for (const auto& [n, v] : named()) {
    if (n == name) return *v;
  }
  throw ValidationError("unknown subset " + name);
}

std::vector<ConditionedSample>& SplitSet::by_name(const std::string& name) {
  return const_cast<std::vector<ConditionedSample>&>(std::as_const(*this).by_name(name));
}

void save_split_manifest(const std::filesystem::path& path, const SplitSet& splits) {
  Json j;
  j["version"] = kManifestVersion;
  j["seed"] = splits.options.seed;
  j["val_fraction"] = splits.options.val_fraction;
  j["augment_train"] = splits.options.augment_train;
  j["holdout"] = {{"topics", splits.holdout.topics},
                  {"criterion_classes", splits.holdout.criterion_classes}};
  j["excluded_ties"] = splits.excluded_ties;
  Json subsets = Json::object();
  for (const auto& [name, v] : splits.named()) {
    Json arr = Json::array();
    for (const auto& s : *v) arr.push_back(to_json(s));
    subsets[name] = std::move(arr);
  }
  j["subsets"] = std::move(subsets);
  write_file_atomic(path, dump_stable(j));
}

SplitSet load_split_manifest(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw ParseError(std::string("split manifest: ") + e.what(), 0);
  }
  if (j.value("version", 0) != kManifestVersion) {
    throw ValidationError("unsupported split manifest version in " + path.string());
  }
  SplitSet out;
  out.options.seed = j.at("seed").get<std::uint64_t>();
  out.options.val_fraction = j.at("val_fraction").get<double>();
  out.options.augment_train = j.value("augment_train", false);
  out.holdout.topics = j.at("holdout").at("topics").get<std::vector<int>>();
  out.holdout.criterion_classes = j.at("holdout").at("criterion_classes").get<std::vector<int>>();
  out.excluded_ties = j.value("excluded_ties", std::vector<std::string>{});
  for (const auto& [name, arr] : j.at("subsets").items()) {
    auto& dest = out.by_name(name);
    for (const auto& s : arr) dest.push_back(sample_from_json(s));
  }
  return out;
}

}  // namespace prefboard::mining

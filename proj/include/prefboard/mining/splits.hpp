#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "prefboard/core/types.hpp"

namespace prefboard::mining {

/// Topics and criterion classes withheld from training.
struct HoldoutSpec {
  std::vector<int> topics;
  std::vector<int> criterion_classes;

  bool operator==(const HoldoutSpec&) const = default;
};

struct SplitOptions {
  std::uint64_t seed = 0;
  double val_fraction = 0.1;
  /// Adds one perturbed copy (remove/add/replace, rotating) of every training
  /// sample. Off by default.
  bool augment_train = false;
};

/// Everything a split needs to know about cluster structure.
struct ClusterLabels {
  std::map<std::string, int> topic_of_instance;
  /// Detailed criterion cluster -> broad class; identity when absent.
  std::map<int, int> class_of_cluster;
  std::set<int> known_topics;
  std::set<int> known_classes;
};

struct SplitSet {
  std::vector<ConditionedSample> train;
  std::vector<ConditionedSample> val;
  std::vector<ConditionedSample> t_plus;
  std::vector<ConditionedSample> t_minus;
  std::vector<ConditionedSample> t_minus_remove;
  std::vector<ConditionedSample> t_minus_add;
  std::vector<ConditionedSample> t_minus_replace;
  std::vector<ConditionedSample> c_plus;
  std::vector<ConditionedSample> c_minus;
  std::vector<ConditionedSample> c_minus_remove;
  std::vector<ConditionedSample> c_minus_add;
  std::vector<ConditionedSample> c_minus_replace;
  HoldoutSpec holdout;
  SplitOptions options;
  /// Tie instances inside a held-out region, excluded from every subset.
  std::vector<std::string> excluded_ties;

  /// Named subsets in a fixed order.
  std::vector<std::pair<std::string, const std::vector<ConditionedSample>*>> named() const;
  std::vector<ConditionedSample>& by_name(const std::string& name);
  const std::vector<ConditionedSample>& by_name(const std::string& name) const;
};

/// Modal class of a criteria set under the class map; ties go to the lowest
/// id and unassigned items are ignored unless nothing else is present.
int modal_class(const CriteriaSet& c, const std::map<int, int>& class_of_cluster);

/// Partitions samples by instance. Instances in a held-out topic go to the T
/// subsets; otherwise, instances whose A or B sample has a held-out modal
/// class go to the C subsets; the rest are split train/val by instance. Minus
/// samples of the held-out regions get remove/add/replace variants.
/// Throws ValidationError for unknown holdout ids or unlabeled instances.
SplitSet make_splits(std::span<const ConditionedSample> samples, const ClusterLabels& labels,
                     const HoldoutSpec& holdout, const SplitOptions& options);

void save_split_manifest(const std::filesystem::path& path, const SplitSet& splits);
SplitSet load_split_manifest(const std::filesystem::path& path);

}  // namespace prefboard::mining

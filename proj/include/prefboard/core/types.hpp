#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace prefboard {

/// Human preference between response A and response B.
enum class Label { win, tie, lose };

/// win <-> lose, tie stays tie.
constexpr Label reversed(Label y) noexcept {
  switch (y) {
    case Label::win: return Label::lose;
    case Label::lose: return Label::win;
    case Label::tie: return Label::tie;
  }
  return y;
}

std::string_view to_string(Label y) noexcept;
Label label_from_string(std::string_view s);

struct Turn {
  std::string role;  // "user" | "assistant" | "system"
  std::string text;

  bool operator==(const Turn&) const = default;
};

/// One arena record: context turns, the two competing final responses and the
/// human label. `query` is the first user turn; `id` is the canonical hash of
/// (turns, response_a, response_b).
struct PreferenceInstance {
  std::string id;
  std::string query;
  std::vector<Turn> turns;
  std::string response_a;
  std::string response_b;
  Label label = Label::tie;
  std::optional<std::string> model_a;
  std::optional<std::string> model_b;

  bool operator==(const PreferenceInstance&) const = default;
};

/// Builds an instance, filling `query` and `id`. Throws ValidationError when
/// a response is empty or no user turn exists.
PreferenceInstance make_instance(std::vector<Turn> turns, std::string response_a,
                                 std::string response_b, Label label,
                                 std::optional<std::string> model_a = std::nullopt,
                                 std::optional<std::string> model_b = std::nullopt);

void validate_instance(const PreferenceInstance& instance);

/// Which response a criteria set favors.
enum class Side { a_preferred, b_preferred };

std::string_view to_string(Side s) noexcept;
Side side_from_string(std::string_view s);
constexpr Side opposite(Side s) noexcept {
  return s == Side::a_preferred ? Side::b_preferred : Side::a_preferred;
}

inline constexpr std::size_t kMaxCriterionLength = 512;
inline constexpr int kUnassignedCluster = -1;

struct CriteriaSet {
  std::vector<std::string> items;
  Side side = Side::a_preferred;
  /// Per-item cluster assignment; empty when not clustered yet.
  std::vector<int> cluster_ids;

  /// Items joined by "; ", the single text used for embedding.
  std::string joined() const;
  bool has_clusters() const noexcept { return cluster_ids.size() == items.size() && !items.empty(); }
  void validate() const;

  bool operator==(const CriteriaSet&) const = default;
};

enum class SubsetTag { plus, minus, minus_remove, minus_add, minus_replace, train, val };
std::string_view to_string(SubsetTag t) noexcept;
SubsetTag subset_tag_from_string(std::string_view s);

enum class NoiseOp { none, remove, add, replace };
std::string_view to_string(NoiseOp op) noexcept;
NoiseOp noise_op_from_string(std::string_view s);

struct SampleOrigin {
  NoiseOp op = NoiseOp::none;
  std::uint64_t seed = 0;
  bool not_noisable = false;

  bool operator==(const SampleOrigin&) const = default;
};

/// Criteria-conditioned pair (c, q, oA, oB, y_c). y_c = 0 when the criteria
/// favor A, 1 when they favor B. Text content lives on the referenced instance.
struct ConditionedSample {
  std::string instance_id;
  Label instance_label = Label::tie;
  CriteriaSet criteria;
  int y_c = 0;
  SubsetTag subset_tag = SubsetTag::train;
  SampleOrigin origin;

  /// "<instance_id>:<side>[:<noise>]", unique within a split.
  std::string sample_id() const;
  void validate() const;

  bool operator==(const ConditionedSample&) const = default;
};

constexpr int label_for_side(Side s) noexcept { return s == Side::a_preferred ? 0 : 1; }

struct DatasetReport {
  std::size_t n_total = 0;
  double win_pct = 0.0;
  double tie_pct = 0.0;
  double lose_pct = 0.0;
  double avg_turns = 0.0;
  double avg_criteria = 0.0;
};

/// Owning id -> instance lookup.
class InstanceIndex {
 public:
  InstanceIndex() = default;
  explicit InstanceIndex(std::vector<PreferenceInstance> instances);

  const PreferenceInstance& at(const std::string& id) const;
  const PreferenceInstance* find(const std::string& id) const;
  const std::vector<PreferenceInstance>& all() const noexcept { return instances_; }
  std::size_t size() const noexcept { return instances_.size(); }

 private:
  std::vector<PreferenceInstance> instances_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace prefboard

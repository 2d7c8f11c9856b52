#include "prefboard/core/types.hpp"

#include <algorithm>

#include "prefboard/core/error.hpp"
#include "prefboard/core/hash.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard {

std::string_view to_string(Label y) noexcept {
  switch (y) {
    case Label::win: return "win";
    case Label::tie: return "tie";
    case Label::lose: return "lose";
  }
  return "tie";
}

Label label_from_string(std::string_view s) {
  if (s == "win") return Label::win;
  if (s == "tie") return Label::tie;
  if (s == "lose") return Label::lose;
  throw ValidationError("unknown label '" + std::string(s) + "'");
}

std::string_view to_string(Side s) noexcept {
  return s == Side::a_preferred ? "A_preferred" : "B_preferred";
}

Side side_from_string(std::string_view s) {
  if (s == "A_preferred" || s == "A") return Side::a_preferred;
  if (s == "B_preferred" || s == "B") return Side::b_preferred;
  throw ValidationError("unknown side '" + std::string(s) + "'");
}

std::string_view to_string(SubsetTag t) noexcept {
  switch (t) {
    case SubsetTag::plus: return "plus";
    case SubsetTag::minus: return "minus";
    case SubsetTag::minus_remove: return "minus_remove";
    case SubsetTag::minus_add: return "minus_add";
    case SubsetTag::minus_replace: return "minus_replace";
    case SubsetTag::train: return "train";
    case SubsetTag::val: return "val";
  }
  return "train";
}

SubsetTag subset_tag_from_string(std::string_view s) {
  for (auto t : {SubsetTag::plus, SubsetTag::minus, SubsetTag::minus_remove, SubsetTag::minus_add,
                 SubsetTag::minus_replace, SubsetTag::train, SubsetTag::val}) {
    if (to_string(t) == s) return t;
  }
  throw ValidationError("unknown subset tag '" + std::string(s) + "'");
}

std::string_view to_string(NoiseOp op) noexcept {
  switch (op) {
    case NoiseOp::none: return "none";
    case NoiseOp::remove: return "remove";
    case NoiseOp::add: return "add";
    case NoiseOp::replace: return "replace";
  }
  return "none";
}

NoiseOp noise_op_from_string(std::string_view s) {
  for (auto op : {NoiseOp::none, NoiseOp::remove, NoiseOp::add, NoiseOp::replace}) {
    if (to_string(op) == s) return op;
  }
  throw ValidationError("unknown noise op '" + std::string(s) + "'");
}

void validate_instance(const PreferenceInstance& instance) {
  if (instance.response_a.empty()) throw ValidationError("response_a is empty");
  if (instance.response_b.empty()) throw ValidationError("response_b is empty");
  const bool has_user = std::any_of(instance.turns.begin(), instance.turns.end(),
                                    [](const Turn& t) { return t.role == "user"; });
  if (!has_user) throw ValidationError("conversation has no user turn");
}

PreferenceInstance make_instance(std::vector<Turn> turns, std::string response_a,
                                 std::string response_b, Label label,
                                 std::optional<std::string> model_a,
                                 std::optional<std::string> model_b) {
  PreferenceInstance inst;
  inst.turns = std::move(turns);
  inst.response_a = std::move(response_a);
  inst.response_b = std::move(response_b);
  inst.label = label;
  inst.model_a = std::move(model_a);
  inst.model_b = std::move(model_b);
  validate_instance(inst);
  for (const auto& t : inst.turns) {
    if (t.role == "user") {
      inst.query = t.text;
      break;
    }
  }
  inst.id = canonical_hash(inst);
  return inst;
}

std::string CriteriaSet::joined() const { return text::join(items, "; "); }

void CriteriaSet::validate() const {
  if (items.empty()) throw ValidationError("criteria set is empty");
  for (const auto& item : items) {
    if (text::trim(item).empty()) throw ValidationError("criterion text is empty");
    if (text::utf8_length(item) > kMaxCriterionLength) {
      throw ValidationError("criterion longer than 512 characters");
    }
  }
  if (!cluster_ids.empty() && cluster_ids.size() != items.size()) {
    throw ValidationError("cluster_ids length does not match items");
  }
}

std::string ConditionedSample::sample_id() const {
  std::string id = instance_id + ":" + (criteria.side == Side::a_preferred ? "A" : "B");
  if (origin.op != NoiseOp::none) {
    id += ":";
    id += to_string(origin.op);
  }
  return id;
}

void ConditionedSample::validate() const {
  criteria.validate();
  if (y_c != label_for_side(criteria.side)) {
    throw ValidationError("y_c disagrees with criteria side for " + instance_id);
  }
}

InstanceIndex::InstanceIndex(std::vector<PreferenceInstance> instances)
    : instances_(std::move(instances)) {
  by_id_.reserve(instances_.size());
  for (std::size_t i = 0; i < instances_.size(); ++i) by_id_.emplace(instances_[i].id, i);
}

const PreferenceInstance& InstanceIndex::at(const std::string& id) const {
  const auto* inst = find(id);
  if (!inst) throw ValidationError("unknown instance id " + id);
  return *inst;
}

const PreferenceInstance* InstanceIndex::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &instances_[it->second];
}

}  // namespace prefboard

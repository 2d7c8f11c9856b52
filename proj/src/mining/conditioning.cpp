#include "prefboard/mining/conditioning.hpp"

#include "prefboard/core/error.hpp"

namespace prefboard::mining {

bool agrees_with_label(const ConditionedSample& s) noexcept {
  return (s.instance_label == Label::win && s.criteria.side == Side::a_preferred) ||
         (s.instance_label == Label::lose && s.criteria.side == Side::b_preferred);
}

std::pair<ConditionedSample, ConditionedSample> derive_conditioned(
    const PreferenceInstance& instance, const ExtractionResult& extraction) {
  if (extraction.instance_id != instance.id) {
    throw ValidationError("extraction " + extraction.instance_id + " does not match instance " +
                          instance.id);
  }
  auto make = [&](const CriteriaSet& c, Side side) {
    ConditionedSample s;
    s.instance_id = instance.id;
    s.instance_label = instance.label;
    s.criteria = c;
    s.criteria.side = side;
    s.y_c = label_for_side(side);
    if (instance.label == Label::tie) {
      s.subset_tag = SubsetTag::train;
    } else {
      s.subset_tag = agrees_with_label(s) ? SubsetTag::plus : SubsetTag::minus;
    }
    s.validate();
    return s;
  };
  return {make(extraction.criteria_a, Side::a_preferred),
          make(extraction.criteria_b, Side::b_preferred)};
}

PlusMinus partition_plus_minus(std::span<const ConditionedSample> samples) {
  PlusMinus out;
  for (const auto& s : samples) {
    if (s.instance_label == Label::tie) {
      out.tie_pool.push_back(s);
    } else if (agrees_with_label(s)) {
      out.plus.push_back(s);
    } else {
      out.minus.push_back(s);
    }
  }
  return out;
}

std::vector<ConditionedSample> derive_all(const InstanceIndex& instances,
                                          std::span<const ExtractionResult> extractions) {
  std::vector<ConditionedSample> out;
  out.reserve(2 * extractions.size());
  for (const auto& e : extractions) {
    auto [a, b] = derive_conditioned(instances.at(e.instance_id), e);
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace prefboard::mining

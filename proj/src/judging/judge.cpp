#include "prefboard/judging/judge.hpp"

#include <cmath>

#include "prefboard/core/error.hpp"
#include "prefboard/core/hash.hpp"
#include "prefboard/crm/model.hpp"
#include "prefboard/judging/crm_judge.hpp"
#include "prefboard/judging/llm_judge.hpp"
#include "prefboard/judging/scripted.hpp"

namespace prefboard::judging {

std::string_view to_string(Preferred p) noexcept {
  switch (p) {
    case Preferred::a: return "A";
    case Preferred::b: return "B";
    case Preferred::tie: return "tie";
  }
  return "tie";
}

Preferred preferred_from_string(std::string_view s) {
  if (s == "A") return Preferred::a;
  if (s == "B") return Preferred::b;
  if (s == "tie") return Preferred::tie;
  throw ValidationError("unknown verdict '" + std::string(s) + "'");
}

std::string_view to_string(SwapPolicy p) noexcept {
  return p == SwapPolicy::none ? "none" : "swap_average";
}

SwapPolicy swap_policy_from_string(std::string_view s) {
  if (s == "none") return SwapPolicy::none;
  if (s == "swap_average") return SwapPolicy::swap_average;
  throw ValidationError("unknown swap policy '" + std::string(s) + "'");
}

std::string_view to_string(JudgeKind k) noexcept {
  switch (k) {
    case JudgeKind::crm: return "crm";
    case JudgeKind::llm: return "llm";
    case JudgeKind::scripted: return "scripted";
  }
  return "scripted";
}

JudgeKind judge_kind_from_string(std::string_view s) {
  if (s == "crm") return JudgeKind::crm;
  if (s == "llm") return JudgeKind::llm;
  if (s == "scripted") return JudgeKind::scripted;
  throw ValidationError("unknown judge kind '" + std::string(s) + "'");
}

JudgeRequest JudgeRequest::swapped() const {
  JudgeRequest r = *this;
  std::swap(r.response_a, r.response_b);
  std::swap(r.model_a, r.model_b);
  return r;
}

JudgeRequest request_for(const ConditionedSample& sample, const PreferenceInstance& instance) {
  if (sample.instance_id != instance.id) {
    throw ValidationError("sample " + sample.sample_id() + " does not belong to " + instance.id);
  }
  return {sample.criteria.items, instance.turns, instance.response_a, instance.response_b, {}, {}, {}};
}

std::vector<double> Judge::prob_b_batch(std::span<const JudgeRequest> requests) {
  std::vector<double> out;
  out.reserve(requests.size());
  for (const auto& r : requests) out.push_back(prob_b(r));
  return out;
}

std::vector<double> InvertedJudge::prob_b_batch(std::span<const JudgeRequest> requests) {
  auto p = inner_->prob_b_batch(requests);
  for (double& x : p) x = 1.0 - x;
  return p;
}

Preferred resolve(double prob_b, double tie_band) {
  // A configured band of 0.02 should hold p = 0.52, whose distance from 0.5
  // rounds to just above 0.02. No slack with a zero band.
  const double slack = tie_band > 0.0 ? 1e-12 : 0.0;
  if (std::abs(prob_b - 0.5) <= tie_band + slack) return Preferred::tie;
  return prob_b > 0.5 ? Preferred::b : Preferred::a;
}

Verdict judge_pair(Judge& judge, const JudgeRequest& request, SwapPolicy policy,
                   double tie_band) {
  const JudgeRequest one[] = {request};
  return judge_batch(judge, one, policy, tie_band).front();
}

std::vector<Verdict> judge_batch(Judge& judge, std::span<const JudgeRequest> requests,
                                 SwapPolicy policy, double tie_band) {
  if (!(tie_band >= 0.0 && tie_band < 0.5)) throw ValidationError("tie_band must be in [0, 0.5)");
  auto p = judge.prob_b_batch(requests);
  if (policy == SwapPolicy::swap_average) {
    std::vector<JudgeRequest> swapped;
    swapped.reserve(requests.size());
    for (const auto& r : requests) swapped.push_back(r.swapped());
    const auto q = judge.prob_b_batch(swapped);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = combine_swap(p[i], q[i]);
  }
  std::vector<Verdict> out(requests.size());
  const auto id = judge.id();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) throw Error("judge " + id + " returned an invalid probability");
    out[i] = Verdict{resolve(p[i], tie_band), p[i], id, criteria_hash(requests[i].criteria)};
  }
  return out;
}

void JudgeSpec::validate() const {
  if (!(tie_band >= 0.0 && tie_band < 0.5)) throw ValidationError("tie_band must be in [0, 0.5)");
  if (kind == JudgeKind::crm && config.empty()) {
    throw ValidationError("a crm judge needs a model file");
  }
}

std::shared_ptr<Judge> make_judge(const JudgeSpec& spec,
                                  std::shared_ptr<providers::Embedder> embedder,
                                  std::shared_ptr<providers::ChatProvider> chat) {
  spec.validate();
  switch (spec.kind) {
    case JudgeKind::crm:
      if (!embedder) throw ValidationError("a crm judge needs an embedder");
      return std::make_shared<CrmJudge>(crm::load_model(spec.config), std::move(embedder));
    case JudgeKind::llm:
      if (!chat) throw ValidationError("an llm judge needs a chat provider");
      return std::make_shared<LlmJudge>(std::move(chat));
    case JudgeKind::scripted:
      return make_scripted(spec.config);
  }
  throw ValidationError("unknown judge kind");
}

}  // namespace prefboard::judging

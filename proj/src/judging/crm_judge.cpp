#include "prefboard/judging/crm_judge.hpp"

#include "prefboard/core/error.hpp"
#include "prefboard/core/hash.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::judging {

crm::PairInput pair_input(const JudgeRequest& r) {
  std::vector<std::string> turns;
  for (const auto& t : r.context) turns.push_back(t.text);
  return {text::join(r.criteria, "; "), text::join(turns, "\n"), r.response_a, r.response_b};
}

CrmJudge::CrmJudge(crm::CrmModel model, std::shared_ptr<providers::Embedder> embedder)
    : model_(std::move(model)), embedder_(std::move(embedder)), featurizer_(*embedder_) {
  model_.validate();
  if (embedder_->dim() != model_.dim) {
    throw ValidationError("embedder dim " + std::to_string(embedder_->dim()) +
                          " does not match model dim " + std::to_string(model_.dim));
  }
  const auto digest = sha256_hex(Json(model_.weights).dump());
  id_ = "crm:" + std::string(crm::to_string(model_.mode)) + ":" + digest.substr(0, 12);
}

double CrmJudge::prob_b(const JudgeRequest& request) {
  const JudgeRequest one[] = {request};
  return prob_b_batch(one).front();
}

std::vector<double> CrmJudge::prob_b_batch(std::span<const JudgeRequest> requests) {
  std::vector<crm::PairInput> inputs;
  inputs.reserve(requests.size());
  for (const auto& r : requests) inputs.push_back(pair_input(r));
  std::lock_guard lock(mutex_);
  const auto preds = crm::predict_batch(model_, featurizer_, inputs);
  std::vector<double> out;
  out.reserve(preds.size());
  for (const auto& p : preds) out.push_back(p.prob_b);
  return out;
}

}  // namespace prefboard::judging

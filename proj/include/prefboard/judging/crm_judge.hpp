#pragma once

#include <memory>
#include <mutex>

#include "prefboard/crm/features.hpp"
#include "prefboard/crm/model.hpp"
#include "prefboard/judging/judge.hpp"

namespace prefboard::judging {

/// Judges with a trained reward model; prob_b is the model's predicted
/// probability that the criteria favor B.
class CrmJudge final : public Judge {
 public:
  CrmJudge(crm::CrmModel model, std::shared_ptr<providers::Embedder> embedder);

  std::string id() const override { return id_; }
  double prob_b(const JudgeRequest& request) override;
  std::vector<double> prob_b_batch(std::span<const JudgeRequest> requests) override;

  const crm::CrmModel& model() const noexcept { return model_; }

 private:
  crm::CrmModel model_;
  std::shared_ptr<providers::Embedder> embedder_;
  std::mutex mutex_;  // the featurizer's embedding cache is not thread-safe
  crm::Featurizer featurizer_;
  std::string id_;
};

crm::PairInput pair_input(const JudgeRequest& request);

}  // namespace prefboard::judging

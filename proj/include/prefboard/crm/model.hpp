#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefboard/crm/features.hpp"

namespace prefboard::crm {

enum class CrmMode { pairwise_cls, pointwise_ranking };
std::string_view to_string(CrmMode m) noexcept;
CrmMode crm_mode_from_string(std::string_view s);

struct TrainMeta {
  std::uint64_t seed = 0;
  int epochs_run = 0;
  long steps = 0;
  long best_step = 0;
  double best_val_loss = 0.0;
  bool early_stopped = false;

  bool operator==(const TrainMeta&) const = default;
};

/// Linear reward model. Pairwise mode scores feature rows of length 4d + 1
/// with no bias, so swapping A and B maps the probability p to 1 - p.
/// Pointwise mode scores each response with a row of length 3d + 1.
struct CrmModel {
  CrmMode mode = CrmMode::pairwise_cls;
  std::size_t dim = 0;
  std::vector<double> weights;
  std::string embedder_id;
  TrainMeta meta;

  std::size_t feature_length() const noexcept;
  static CrmModel zeros(CrmMode mode, std::size_t dim);
  void validate() const;

  bool operator==(const CrmModel&) const = default;
};

/// w . phi, checking the dimension.
double raw_score(const CrmModel& model, std::span<const double> features);

/// sigma(w . phi): probability that the criteria favor response B.
double score_pair(const CrmModel& model, std::span<const double> features);

struct Prediction {
  double prob_b = 0.5;
  int hard_label = 0;  // 1 when B is predicted
};

/// Pairwise: p from score_pair, label 1 iff p > 0.5. Pointwise: r_A and r_B
/// from point features, p = sigma(r_B - r_A), label 1 iff r_B > r_A.
Prediction predict(const CrmModel& model, Featurizer& featurizer, const PairInput& input);
std::vector<Prediction> predict_batch(const CrmModel& model, Featurizer& featurizer,
                                      std::span<const PairInput> inputs);

void save_model(const std::filesystem::path& path, const CrmModel& model);
CrmModel load_model(const std::filesystem::path& path);

}  // namespace prefboard::crm

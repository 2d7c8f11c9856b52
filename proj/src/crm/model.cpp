#include "prefboard/crm/model.hpp"

#include <cmath>

#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/crm/losses.hpp"
#include "prefboard/kernels/kernels.hpp"

namespace prefboard::crm {

namespace {
constexpr int kModelVersion = 1;
}

std::string_view to_string(CrmMode m) noexcept {
  return m == CrmMode::pairwise_cls ? "pairwise_cls" : "pointwise_ranking";
}

CrmMode crm_mode_from_string(std::string_view s) {
  if (s == "pairwise_cls" || s == "cls") return CrmMode::pairwise_cls;
  if (s == "pointwise_ranking" || s == "ranking") return CrmMode::pointwise_ranking;
  throw ValidationError("unknown model mode '" + std::string(s) + "'");
}

std::size_t CrmModel::feature_length() const noexcept {
  return mode == CrmMode::pairwise_cls ? pair_feature_length(dim) : point_feature_length(dim);
}

CrmModel CrmModel::zeros(CrmMode mode, std::size_t dim) {
  CrmModel m;
  m.mode = mode;
  m.dim = dim;
  m.weights.assign(m.feature_length(), 0.0);
  return m;
}

void CrmModel::validate() const {
  if (dim == 0) throw ValidationError("model dim must be positive");
  if (weights.size() != feature_length()) {
    throw ValidationError("model has " + std::to_string(weights.size()) + " weights, expected " +
                          std::to_string(feature_length()));
  }
  for (double w : weights) {
    if (!std::isfinite(w)) throw ValidationError("model weights are not finite");
  }
}

double raw_score(const CrmModel& model, std::span<const double> features) {
  if (features.size() != model.weights.size()) {
    throw ValidationError("feature length " + std::to_string(features.size()) +
                          " does not match model length " + std::to_string(model.weights.size()));
  }
  return dot(model.weights, features);
}

double score_pair(const CrmModel& model, std::span<const double> features) {
  if (model.mode != CrmMode::pairwise_cls) {
    throw ValidationError("score_pair needs a pairwise model");
  }
  return sigmoid(raw_score(model, features));
}

Prediction predict(const CrmModel& model, Featurizer& featurizer, const PairInput& input) {
  const PairInput one[] = {input};
  return predict_batch(model, featurizer, one).front();
}

std::vector<Prediction> predict_batch(const CrmModel& model, Featurizer& featurizer,
                                      std::span<const PairInput> inputs) {
  if (featurizer.dim() != model.dim) {
    throw ValidationError("embedder dim " + std::to_string(featurizer.dim()) +
                          " does not match model dim " + std::to_string(model.dim));
  }
  std::vector<Prediction> out(inputs.size());
  if (inputs.empty()) return out;
  if (model.mode == CrmMode::pairwise_cls) {
    const auto x = featurizer.pair_batch(inputs);
    std::vector<double> z(inputs.size());
    kernels::row_dots(x, model.weights, z, kernels::Execution::parallel);
    for (std::size_t i = 0; i < z.size(); ++i) {
      out[i].prob_b = sigmoid(z[i]);
      out[i].hard_label = out[i].prob_b > 0.5 ? 1 : 0;
    }
    return out;
  }
  const auto xa = featurizer.point_batch(inputs, false);
  const auto xb = featurizer.point_batch(inputs, true);
  std::vector<double> ra(inputs.size());
  std::vector<double> rb(inputs.size());
  kernels::row_dots(xa, model.weights, ra, kernels::Execution::parallel);
  kernels::row_dots(xb, model.weights, rb, kernels::Execution::parallel);
  for (std::size_t i = 0; i < ra.size(); ++i) {
    out[i].prob_b = sigmoid(rb[i] - ra[i]);
    out[i].hard_label = rb[i] > ra[i] ? 1 : 0;
  }
  return out;
}

void save_model(const std::filesystem::path& path, const CrmModel& model) {
  model.validate();
  Json j;
  j["version"] = kModelVersion;
  j["mode"] = std::string(to_string(model.mode));
  j["dim"] = model.dim;
  j["embedder"] = model.embedder_id;
  j["weights"] = model.weights;
  j["train_meta"] = {{"seed", model.meta.seed},
                     {"epochs_run", model.meta.epochs_run},
                     {"steps", model.meta.steps},
                     {"best_step", model.meta.best_step},
                     {"best_val_loss", model.meta.best_val_loss},
                     {"early_stopped", model.meta.early_stopped}};
  write_file_atomic(path, dump_stable(j));
}

CrmModel load_model(const std::filesystem::path& path) {
  CrmModel m;
  try {
    const Json j = Json::parse(read_file(path));
    if (!j.contains("version")) throw ValidationError("model file lacks a version field");
    if (j.at("version").get<int>() != kModelVersion) {
      throw ValidationError("unsupported model version " + j.at("version").dump());
    }
    m.mode = crm_mode_from_string(j.at("mode").get<std::string>());
    m.dim = j.at("dim").get<std::size_t>();
    m.embedder_id = j.value("embedder", "");
    m.weights = j.at("weights").get<std::vector<double>>();
    const auto& t = j.at("train_meta");
    m.meta.seed = t.value("seed", std::uint64_t{0});
    m.meta.epochs_run = t.value("epochs_run", 0);
    m.meta.steps = t.value("steps", 0L);
    m.meta.best_step = t.value("best_step", 0L);
    m.meta.best_val_loss = t.value("best_val_loss", 0.0);
    m.meta.early_stopped = t.value("early_stopped", false);
  } catch (const Json::exception& e) {
    throw ParseError("model file " + path.string() + ": " + e.what(), 0);
  }
  m.validate();
  return m;
}

}  // namespace prefboard::crm

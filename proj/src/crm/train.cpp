#include "prefboard/crm/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "prefboard/core/error.hpp"
#include "prefboard/crm/losses.hpp"

namespace prefboard::crm {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || batch_size == 0 || max_epochs <= 0 || eval_every_steps <= 0 ||
      patience <= 0 || !(l2 > 0.0)) {
    throw ValidationError("training hyperparameters must all be positive");
  }
}

TrainSet TrainSet::subset(std::span<const std::size_t> rows) const {
  TrainSet out;
  out.mode = mode;
  out.a = DenseMatrix(rows.size(), a.cols());
  if (mode == CrmMode::pointwise_ranking) out.b = DenseMatrix(rows.size(), b.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::copy(a.row(rows[k]).begin(), a.row(rows[k]).end(), out.a.row(k).begin());
    if (mode == CrmMode::pointwise_ranking) {
      std::copy(b.row(rows[k]).begin(), b.row(rows[k]).end(), out.b.row(k).begin());
    }
    out.y.push_back(y[rows[k]]);
  }
  return out;
}

TrainSet build_train_set(CrmMode mode, Featurizer& featurizer, std::span<const PairInput> inputs,
                         std::span<const int> labels) {
  if (inputs.size() != labels.size()) throw ValidationError("one label per input is required");
  TrainSet set;
  set.mode = mode;
  set.y.assign(labels.begin(), labels.end());
  for (int y : set.y) {
    if (y != 0 && y != 1) throw ValidationError("labels must be 0 or 1");
  }
  if (mode == CrmMode::pairwise_cls) {
    set.a = featurizer.pair_batch(inputs);
  } else {
    set.a = featurizer.point_batch(inputs, false);
    set.b = featurizer.point_batch(inputs, true);
  }
  return set;
}

TrainSet build_train_set(CrmMode mode, Featurizer& featurizer,
                         std::span<const ConditionedSample> samples,
                         const InstanceIndex& instances) {
  std::vector<PairInput> inputs;
  std::vector<int> labels;
  for (const auto& s : samples) {
    inputs.push_back(pair_input(s, instances));
    labels.push_back(s.y_c);
  }
  return build_train_set(mode, featurizer, inputs, labels);
}

namespace {

/// Signed margin toward the favored response: positive means correct.
/// Pairwise: z = w . phi with favored B when y = 1. Pointwise:
/// delta = r_chosen - r_rejected.
double margin(std::span<const double> w, const TrainSet& set, std::size_t i) {
  if (set.mode == CrmMode::pairwise_cls) {
    const double z = dot(w, set.a.row(i));
    return set.y[i] == 1 ? z : -z;
  }
  const double ra = dot(w, set.a.row(i));
  const double rb = dot(w, set.b.row(i));
  return set.y[i] == 1 ? rb - ra : ra - rb;
}

void check_shape(std::span<const double> w, const TrainSet& set) {
  if (w.size() != set.feature_length()) {
    throw ValidationError("weight length " + std::to_string(w.size()) +
                          " does not match feature length " +
                          std::to_string(set.feature_length()));
  }
}

}  // namespace

double example_loss(std::span<const double> w, const TrainSet& set, std::size_t i) {
  if (set.mode == CrmMode::pairwise_cls) return loss_cls_logit(dot(w, set.a.row(i)), set.y[i]);
  const double ra = dot(w, set.a.row(i));
  const double rb = dot(w, set.b.row(i));
  return set.y[i] == 1 ? loss_ranking(rb, ra) : loss_ranking(ra, rb);
}

void add_example_gradient(std::span<const double> w, const TrainSet& set, std::size_t i,
                          double scale, std::span<double> grad) {
  if (set.mode == CrmMode::pairwise_cls) {
    const auto phi = set.a.row(i);
    const double g = scale * (sigmoid(dot(w, phi)) - set.y[i]);
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += g * phi[j];
    return;
  }
  const auto chosen = set.y[i] == 1 ? set.b.row(i) : set.a.row(i);
  const auto rejected = set.y[i] == 1 ? set.a.row(i) : set.b.row(i);
  const double g = scale * (sigmoid(dot(w, chosen) - dot(w, rejected)) - 1.0);
  for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += g * (chosen[j] - rejected[j]);
}

double data_loss(std::span<const double> w, const TrainSet& set) {
  check_shape(w, set);
  if (set.size() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) total += softplus(-margin(w, set, i));
  return total / static_cast<double>(set.size());
}

double objective(std::span<const double> w, const TrainSet& set, double l2) {
  return data_loss(w, set) + 0.5 * l2 * dot(w, w);
}

double accuracy(std::span<const double> w, const TrainSet& set) {
  check_shape(w, set);
  if (set.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < set.size(); ++i) correct += margin(w, set, i) > 0.0 ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(set.size());
}

TrainResult train(const TrainSet& train_set, const TrainSet& val_set, const TrainConfig& config,
                  std::size_t dim, const std::string& embedder_id) {
  config.validate();
  if (train_set.size() < 2) throw ValidationError("training needs at least two samples");
  if (val_set.size() == 0) throw ValidationError("training needs a validation set");
  if (train_set.mode != val_set.mode) throw ValidationError("train and validation modes differ");

  TrainResult result;
  CrmModel model = CrmModel::zeros(train_set.mode, dim);
  model.embedder_id = embedder_id;
  check_shape(model.weights, train_set);
  check_shape(model.weights, val_set);

  std::vector<double>& w = model.weights;
  std::vector<double> best_w = w;
  double best_loss = std::numeric_limits<double>::infinity();
  long best_step = 0;
  int bad_checks = 0;
  bool stopped = false;
  long step = 0;
  long last_eval_step = -1;
  int epoch = 0;

  auto evaluate = [&]() {
    const double loss = data_loss(w, val_set);
    if (!std::isfinite(loss)) throw NumericError("validation loss is not finite", step);
    result.evals.push_back({step, epoch, loss});
    last_eval_step = step;
    if (loss < best_loss) {
      best_loss = loss;
      best_w = w;
      best_step = step;
      bad_checks = 0;
    } else if (++bad_checks >= config.patience) {
      stopped = true;
    }
  };

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch = config.full_batch ? train_set.size() : config.batch_size;
  std::vector<double> grad(w.size());

  for (epoch = 1; epoch <= config.max_epochs && !stopped; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size() && !stopped; start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      const double scale = 1.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      double batch_loss = 0.0;
      for (std::size_t k = start; k < end; ++k) {
        batch_loss += example_loss(w, train_set, order[k]);
        add_example_gradient(w, train_set, order[k], scale, grad);
      }
      ++step;
      if (!std::isfinite(batch_loss)) throw NumericError("training loss is not finite", step);
      for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] -= config.learning_rate * (grad[j] + config.l2 * w[j]);
        if (!std::isfinite(w[j])) throw NumericError("weights diverged", step);
      }
      if (step % config.eval_every_steps == 0) evaluate();
    }
    result.epoch_objective.push_back(objective(w, train_set, config.l2));
    model.meta.epochs_run = epoch;
  }
  if (!stopped && last_eval_step != step) {
    --epoch;
    evaluate();
  }

  model.weights = best_w;
  model.meta.seed = config.seed;
  model.meta.steps = step;
  model.meta.best_step = best_step;
  model.meta.best_val_loss = best_loss;
  model.meta.early_stopped = stopped;
  result.model = std::move(model);
  return result;
}

std::pair<TrainSet, TrainSet> hold_out(const TrainSet& set, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ValidationError("fraction must be in (0, 1)");
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  auto n_val = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(set.size())));
  n_val = std::clamp<std::size_t>(n_val, 1, set.size() - 1);
  std::vector<std::size_t> val(order.begin(), order.begin() + static_cast<long>(n_val));
  std::vector<std::size_t> tr(order.begin() + static_cast<long>(n_val), order.end());
  std::sort(val.begin(), val.end());
  std::sort(tr.begin(), tr.end());
  return {set.subset(tr), set.subset(val)};
}

}  // namespace prefboard::crm

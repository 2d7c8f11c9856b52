#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "prefboard/core/matrix.hpp"
#include "prefboard/core/types.hpp"
#include "prefboard/crm/features.hpp"
#include "prefboard/crm/model.hpp"

namespace prefboard::crm {

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t batch_size = 32;
  int max_epochs = 3;
  int eval_every_steps = 50;
  int patience = 3;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
  /// One step per epoch over the whole training set (ignores batch_size).
  bool full_batch = false;

  void validate() const;
};

/// Featurized training examples. Pairwise: `a` holds phi, `y` the label y_c.
/// Pointwise: `a` and `b` hold the point features of responses A and B; the
/// response the criteria favor (B when y = 1) is the chosen one.
struct TrainSet {
  CrmMode mode = CrmMode::pairwise_cls;
  DenseMatrix a;
  DenseMatrix b;
  std::vector<int> y;

  std::size_t size() const noexcept { return y.size(); }
  std::size_t feature_length() const noexcept { return a.cols(); }
  TrainSet subset(std::span<const std::size_t> rows) const;
};

TrainSet build_train_set(CrmMode mode, Featurizer& featurizer, std::span<const PairInput> inputs,
                         std::span<const int> labels);
TrainSet build_train_set(CrmMode mode, Featurizer& featurizer,
                         std::span<const ConditionedSample> samples,
                         const InstanceIndex& instances);

/// Data loss of one example under weights w.
double example_loss(std::span<const double> w, const TrainSet& set, std::size_t i);
/// grad += scale * d(example_loss)/dw.
void add_example_gradient(std::span<const double> w, const TrainSet& set, std::size_t i,
                          double scale, std::span<double> grad);
/// Mean data loss over the set (no penalty).
double data_loss(std::span<const double> w, const TrainSet& set);
/// Mean data loss plus (l2 / 2) * |w|^2.
double objective(std::span<const double> w, const TrainSet& set, double l2);
/// Fraction of examples whose favored response is predicted; exact ties count
/// as wrong.
double accuracy(std::span<const double> w, const TrainSet& set);

struct EvalRecord {
  long step = 0;
  int epoch = 0;
  double val_loss = 0.0;
};

struct TrainResult {
  CrmModel model;  // best-validation weights
  std::vector<EvalRecord> evals;
  /// Training objective at the end of each epoch.
  std::vector<double> epoch_objective;
};

/// Mini-batch gradient descent from zero weights on the mode's loss plus the
/// L2 penalty, reshuffling with the seed every epoch. Validation loss is
/// checked every eval_every_steps and once more at the end; training stops
/// after `patience` checks without strict improvement. Throws NumericError
/// with the step index when the loss turns non-finite.
TrainResult train(const TrainSet& train_set, const TrainSet& val_set, const TrainConfig& config,
                  std::size_t dim, const std::string& embedder_id = {});

/// Seeded random split of `fraction` of the rows into a validation set.
std::pair<TrainSet, TrainSet> hold_out(const TrainSet& set, double fraction, std::uint64_t seed);

}  // namespace prefboard::crm

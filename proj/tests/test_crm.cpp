#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "prefboard/core/error.hpp"
#include "prefboard/crm/features.hpp"
#include "prefboard/crm/grad_check.hpp"
#include "prefboard/crm/losses.hpp"
#include "prefboard/crm/model.hpp"
#include "prefboard/crm/train.hpp"
#include "prefboard/providers/embedding.hpp"
#include "prefboard/synthetic/generators.hpp"
#include "support/test_util.hpp"

using namespace prefboard;
using namespace prefboard::crm;
using prefboard::testing::TempDir;

namespace {

std::vector<double> random_vec(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<double> v(d);
  for (auto& x : v) x = g(rng);
  return v;
}

// A small linearly separable pairwise set in feature space.
TrainSet toy_set(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto truth = random_vec(pair_feature_length(d), rng);
  TrainSet s;
  s.mode = CrmMode::pairwise_cls;
  s.a = DenseMatrix(n, pair_feature_length(d));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = random_vec(pair_feature_length(d), rng);
    std::copy(row.begin(), row.end(), s.a.row(i).begin());
    s.y.push_back(dot(row, truth) > 0 ? 1 : 0);
  }
  return s;
}

struct Planted {
  synthetic::PlantedSuite suite = synthetic::planted_suite(120, 4);
  providers::MockEmbedder embedder{32};
};

}  // namespace

TEST(Losses, ChanceLevelIsLn2) {
  EXPECT_NEAR(loss_cls(0.5, 1), std::log(2.0), 1e-15);
  EXPECT_NEAR(loss_cls(0.5, 0), std::log(2.0), 1e-15);
  EXPECT_NEAR(loss_ranking(1.3, 1.3), std::log(2.0), 1e-15);
}

TEST(Losses, KnownValues) {
  // -ln sigma(2) = ln(1 + e^-2)
  EXPECT_NEAR(loss_ranking(2.0, 0.0), 0.126928011, 1e-9);
  EXPECT_NEAR(sigmoid(2.0), 0.880797078, 1e-9);
  EXPECT_NEAR(loss_cls(0.8, 1), -std::log(0.8), 1e-12);
  EXPECT_NEAR(loss_cls(0.8, 0), -std::log(0.2), 1e-12);
  EXPECT_EQ(loss_cls(1.0, 1), 0.0);
  EXPECT_TRUE(std::isinf(loss_cls(1.0, 0)));
  EXPECT_THROW(loss_cls(1.2, 1), ValidationError);
  EXPECT_THROW(loss_cls(0.5, 2), ValidationError);
}

TEST(Losses, StableForLargeLogits) {
  EXPECT_NEAR(loss_cls_logit(800.0, 1), 0.0, 1e-300);
  EXPECT_NEAR(loss_cls_logit(800.0, 0), 800.0, 1e-9);
  EXPECT_NEAR(loss_cls_logit(-800.0, 1), 800.0, 1e-9);
  EXPECT_EQ(sigmoid(-800.0), 0.0);
  EXPECT_EQ(sigmoid(800.0), 1.0);
}

TEST(Features, LayoutAndLengths) {
  EXPECT_EQ(pair_feature_length(8), 33u);
  EXPECT_EQ(point_feature_length(8), 25u);
  const std::vector<double> ec{1, 2}, eq{3, 4}, ea{5, 7}, eb{1, 1};
  std::vector<double> out(pair_feature_length(2));
  pair_features_from(ec, eq, ea, eb, 0.5, out);
  EXPECT_EQ(out, (std::vector<double>{4, 12, 12, 24, 4, 6, 0.5, 0.5, 1.0}));
  std::vector<double> pt(point_feature_length(2));
  point_features_from(ec, eq, ea, 2.0, pt);
  EXPECT_EQ(pt, (std::vector<double>{5, 14, 15, 28, 5, 7, 2.0}));
}

TEST(Features, LengthRatioClipsAndCountsCodePoints) {
  EXPECT_NEAR(length_log_ratio("ééé", "abc"), 0.0, 1e-15);
  EXPECT_NEAR(length_log_ratio("aaaa", "a"), std::log(4.0), 1e-15);
  EXPECT_EQ(length_log_ratio(std::string(1000, 'a'), "a"), kLengthClip);
  EXPECT_EQ(length_log_ratio("a", std::string(1000, 'a')), -kLengthClip);
  EXPECT_THROW(length_log_ratio("", "a"), ValidationError);
}

TEST(Features, SwapNegatesEveryCoordinate) {
  providers::MockEmbedder emb(16);
  const auto ab = featurize_pair("be brief", "what is tea", "Tea is a drink.", "Tea, a drink made from leaves.", emb);
  const auto ba = featurize_pair("be brief", "what is tea", "Tea, a drink made from leaves.", "Tea is a drink.", emb);
  ASSERT_EQ(ab.size(), ba.size());
  for (std::size_t i = 0; i < ab.size(); ++i) EXPECT_EQ(ab[i], -ba[i]);
}

TEST(Features, IdenticalResponsesGiveZeroFeatures) {
  providers::MockEmbedder emb(16);
  const auto f = featurize_pair("c", "q", "same answer", "same answer", emb);
  for (double x : f) EXPECT_EQ(x, 0.0);
  CrmModel m = CrmModel::zeros(CrmMode::pairwise_cls, 16);
  std::mt19937_64 rng(1);
  m.weights = random_vec(m.feature_length(), rng);
  EXPECT_EQ(score_pair(m, f), 0.5);
}

TEST(Model, SwapMapsPToOneMinusP) {
  std::mt19937_64 rng(2);
  CrmModel m = CrmModel::zeros(CrmMode::pairwise_cls, 8);
  m.weights = random_vec(m.feature_length(), rng);
  for (int t = 0; t < 200; ++t) {
    const auto ec = random_vec(8, rng), eq = random_vec(8, rng), ea = random_vec(8, rng),
               eb = random_vec(8, rng);
    const double l = std::uniform_real_distribution<double>(-5, 5)(rng);
    std::vector<double> f(33), g(33);
    pair_features_from(ec, eq, ea, eb, l, f);
    pair_features_from(ec, eq, eb, ea, -l, g);
    EXPECT_NEAR(score_pair(m, f) + score_pair(m, g), 1.0, 1e-12);
  }
}

TEST(Model, DimensionMismatchRejected) {
  const auto m = CrmModel::zeros(CrmMode::pairwise_cls, 8);
  EXPECT_THROW(raw_score(m, std::vector<double>(10)), ValidationError);
  const auto p = CrmModel::zeros(CrmMode::pointwise_ranking, 8);
  EXPECT_THROW(score_pair(p, std::vector<double>(25)), ValidationError);
}

TEST(Model, SaveLoadIsExact) {
  TempDir dir;
  std::mt19937_64 rng(3);
  CrmModel m = CrmModel::zeros(CrmMode::pointwise_ranking, 4);
  m.weights = random_vec(m.feature_length(), rng);
  m.embedder_id = "mock-4";
  m.meta.seed = 9;
  m.meta.steps = 12;
  save_model(dir / "m.json", m);
  EXPECT_EQ(load_model(dir / "m.json"), m);
}

TEST(Model, LoadRejectsMissingOrWrongVersion) {
  TempDir dir;
  prefboard::testing::write_text(dir / "a.json",
                                 R"({"mode":"pairwise_cls","dim":1,"weights":[0,0,0,0,0],"train_meta":{}})");
  EXPECT_THROW(load_model(dir / "a.json"), ValidationError);
  prefboard::testing::write_text(
      dir / "b.json", R"({"version":999,"mode":"pairwise_cls","dim":1,"weights":[0,0,0,0,0],"train_meta":{}})");
  EXPECT_THROW(load_model(dir / "b.json"), ValidationError);
  prefboard::testing::write_text(dir / "c.json", "{not json");
  EXPECT_THROW(load_model(dir / "c.json"), ParseError);
}

TEST(GradCheck, BothModesOnPlantedSamples) {
  Planted p;
  Featurizer f(p.embedder);
  for (auto mode : {CrmMode::pairwise_cls, CrmMode::pointwise_ranking}) {
    const auto set = build_train_set(mode, f, p.suite.samples, p.suite.instances);
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g(0.0, 0.3);
    std::vector<double> w(set.feature_length());
    for (auto& x : w) x = g(rng);
    for (std::size_t i = 0; i < 10; ++i) {
      const auto r = grad_check(w, set, i, 1e-3, 1e-5, 30, i);
      EXPECT_LE(r.max_rel_error, 1e-6) << to_string(mode) << " example " << i;
      EXPECT_EQ(r.coords_checked, 30u);
    }
  }
}

TEST(Train, FullBatchObjectiveDecreases) {
  const auto set = toy_set(200, 4, 5);
  auto [tr, val] = hold_out(set, 0.2, 1);
  TrainConfig c;
  c.full_batch = true;
  c.max_epochs = 40;
  c.learning_rate = 0.5;
  c.patience = 1000;
  c.eval_every_steps = 1000;
  const auto r = train(tr, val, c, 4);
  ASSERT_EQ(r.epoch_objective.size(), 40u);
  for (std::size_t i = 1; i < r.epoch_objective.size(); ++i)
    EXPECT_LE(r.epoch_objective[i], r.epoch_objective[i - 1] + 1e-12);
  EXPECT_LT(r.epoch_objective.back(), std::log(2.0));
  EXPECT_GE(accuracy(r.model.weights, val), 0.85);
}

TEST(Train, SameSeedSameModel) {
  const auto set = toy_set(150, 3, 6);
  auto [tr, val] = hold_out(set, 0.2, 2);
  TrainConfig c;
  c.seed = 11;
  const auto a = train(tr, val, c, 3, "e");
  const auto b = train(tr, val, c, 3, "e");
  EXPECT_EQ(a.model, b.model);
  c.seed = 12;
  EXPECT_NE(train(tr, val, c, 3, "e").model.weights, a.model.weights);
}

TEST(Train, PatienceStopsEarly) {
  // Labels are noise, so validation loss stops improving quickly.
  auto set = toy_set(300, 3, 7);
  std::mt19937_64 rng(8);
  for (auto& y : set.y) y = static_cast<int>(rng() & 1);
  auto [tr, val] = hold_out(set, 0.3, 3);
  TrainConfig c;
  c.patience = 1;
  c.eval_every_steps = 1;
  c.batch_size = 8;
  c.max_epochs = 50;
  c.learning_rate = 0.5;
  const auto r = train(tr, val, c, 3);
  EXPECT_TRUE(r.model.meta.early_stopped);
  EXPECT_LT(r.model.meta.epochs_run, 50);
  // The kept weights are those of the best validation check.
  double best = r.evals.front().val_loss;
  for (const auto& e : r.evals) best = std::min(best, e.val_loss);
  EXPECT_NEAR(data_loss(r.model.weights, val), best, 1e-12);
}

TEST(Train, DivergenceRaisesNumericError) {
  auto set = toy_set(50, 2, 9);
  for (double& x : set.a.data()) x *= 1e200;
  auto [tr, val] = hold_out(set, 0.2, 4);
  TrainConfig c;
  c.learning_rate = 1e200;
  EXPECT_THROW(train(tr, val, c, 2), NumericError);
}

TEST(Train, RejectsBadConfigAndTinySets) {
  TrainConfig c;
  c.learning_rate = 0.0;
  EXPECT_THROW(c.validate(), ValidationError);
  const auto set = toy_set(10, 2, 10);
  EXPECT_THROW(train(set.subset(std::vector<std::size_t>{0}), set, TrainConfig{}, 2), ValidationError);
  EXPECT_THROW(hold_out(set, 1.0, 0), ValidationError);
}

TEST(Predict, CriteriaChangeThePrediction) {
  // Trained on the planted suite, the model must follow the stated criteria
  // for a fixed response pair.
  const auto suite = synthetic::planted_suite(600, 5);
  providers::MockEmbedder emb(256);
  Featurizer f(emb);
  const auto set = build_train_set(CrmMode::pairwise_cls, f, suite.samples, suite.instances);
  auto [tr, val] = hold_out(set, 0.1, 6);
  TrainConfig c;
  c.learning_rate = 1.0;
  c.max_epochs = 60;
  c.patience = 20;
  c.l2 = 1e-5;
  const auto model = train(tr, val, c, emb.dim(), emb.id()).model;
  std::size_t flipped = 0, checked = 0;
  for (std::size_t i = 0; i + 1 < suite.samples.size() && checked < 60; i += 2) {
    const auto a = pair_input(suite.samples[i], suite.instances);
    const auto b = pair_input(suite.samples[i + 1], suite.instances);
    ++checked;
    if (predict(model, f, a).hard_label != predict(model, f, b).hard_label) ++flipped;
  }
  EXPECT_GE(flipped, checked * 9 / 10);
}

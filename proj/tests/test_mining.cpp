#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/mining/conditioning.hpp"
#include "prefboard/mining/extraction.hpp"
#include "prefboard/mining/noising.hpp"
#include "prefboard/mining/splits.hpp"
#include "prefboard/providers/chat.hpp"
#include "support/test_util.hpp"

using namespace prefboard;
using namespace prefboard::mining;
using prefboard::testing::TempDir;

namespace {

PreferenceInstance instance(int i, Label y) {
  return make_instance({{"user", "question " + std::to_string(i)}}, "answer a " + std::to_string(i),
                       "answer b " + std::to_string(i), y);
}

ExtractionResult extraction(const PreferenceInstance& inst, std::vector<std::string> a,
                            std::vector<std::string> b) {
  return {inst.id, {std::move(a), Side::a_preferred, {}}, {std::move(b), Side::b_preferred, {}}};
}

ConditionedSample sample_with(std::size_t k, int first_cluster = 0) {
  ConditionedSample s;
  s.instance_id = "inst";
  s.instance_label = Label::win;
  s.subset_tag = SubsetTag::minus;
  s.criteria.side = Side::b_preferred;
  s.y_c = 1;
  for (std::size_t i = 0; i < k; ++i) {
    s.criteria.items.push_back("criterion " + std::to_string(i));
    s.criteria.cluster_ids.push_back(first_cluster + static_cast<int>(i % 2));
  }
  return s;
}

CriteriaSet flipped_with(std::size_t k) {
  CriteriaSet c;
  c.side = Side::a_preferred;
  for (std::size_t i = 0; i < k; ++i) {
    c.items.push_back("opposite " + std::to_string(i));
    c.cluster_ids.push_back(10);
  }
  return c;
}

std::vector<ClusteredCriterion> pool_of(int clusters, int per_cluster) {
  std::vector<ClusteredCriterion> pool;
  for (int c = 0; c < clusters; ++c)
    for (int i = 0; i < per_cluster; ++i)
      pool.push_back({"pool " + std::to_string(c) + "/" + std::to_string(i), 100 + c});
  return pool;
}

// n instances with labels cycling win/lose (ties every `tie_every`), topic i % topics,
// criteria in cluster i % classes.
struct Corpus {
  std::vector<ConditionedSample> samples;
  ClusterLabels labels;
};

Corpus corpus(int n, int topics, int classes, int tie_every = 0) {
  Corpus c;
  for (int i = 0; i < n; ++i) {
    Label y = i % 2 == 0 ? Label::win : Label::lose;
    if (tie_every > 0 && i % tie_every == tie_every - 1) y = Label::tie;
    const auto inst = instance(i, y);
    auto e = extraction(inst, {"a1 " + std::to_string(i), "a2 " + std::to_string(i), "a3 " + std::to_string(i)},
                        {"b1 " + std::to_string(i), "b2 " + std::to_string(i), "b3 " + std::to_string(i)});
    const int cls = i % classes;
    e.criteria_a.cluster_ids = {cls, cls, (cls + 1) % classes};
    e.criteria_b.cluster_ids = {cls, cls, (cls + 1) % classes};
    auto [a, b] = derive_conditioned(inst, e);
    c.samples.push_back(a);
    c.samples.push_back(b);
    c.labels.topic_of_instance[inst.id] = i % topics;
    c.labels.known_topics.insert(i % topics);
    c.labels.known_classes.insert(cls);
  }
  return c;
}

std::set<std::string> ids_of(const std::vector<ConditionedSample>& v) {
  std::set<std::string> out;
  for (const auto& s : v) out.insert(s.instance_id);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- extraction

TEST(Extraction, ParsesThreeAndTwoItems) {
  const auto r = parse_extraction(
      "Analysis: A is longer, B is shorter.\n\n## A_PREFERRED\n- depth of analysis\n"
      "2. worked examples\n* historical context\n\n## B_PREFERRED:\n- brevity\n- plain wording\n",
      "id1");
  EXPECT_EQ(r.criteria_a.items.size(), 3u);
  EXPECT_EQ(r.criteria_b.items.size(), 2u);
  EXPECT_EQ(r.criteria_a.items[1], "worked examples");
  EXPECT_EQ(r.criteria_a.side, Side::a_preferred);
  EXPECT_EQ(r.criteria_b.side, Side::b_preferred);
}

TEST(Extraction, DeduplicatesCaseInsensitively) {
  const auto r = parse_extraction(
      "A_PREFERRED\n- Concise responses\n- concise responses\n- direct tone\nB_PREFERRED\n- detail\n",
      "id");
  EXPECT_EQ(r.criteria_a.items, (std::vector<std::string>{"Concise responses", "direct tone"}));
}

TEST(Extraction, CriterionOnBothSidesIsDropped) {
  const auto r = parse_extraction("A_PREFERRED\n- x\n- shared\nB_PREFERRED\n- shared\n- y\n", "id");
  EXPECT_EQ(r.criteria_a.items, std::vector<std::string>{"x"});
  EXPECT_EQ(r.criteria_b.items, std::vector<std::string>{"y"});
}

TEST(Extraction, MissingHeadingOrEmptySideFails) {
  EXPECT_THROW(parse_extraction("A_PREFERRED\n- x\n", "id"), ExtractionError);
  EXPECT_THROW(parse_extraction("A_PREFERRED\n- x\nB_PREFERRED\n", "id"), ExtractionError);
}

TEST(Extraction, MockPassthroughGivesOneCriterionPerSide) {
  auto chat = providers::MockChatProvider::fixed(
      "mock", "A_PREFERRED\n- concise responses\nB_PREFERRED\n- detailed responses\n");
  const auto inst = instance(1, Label::win);
  const auto r = extract_criteria(inst, chat);
  EXPECT_EQ(r.instance_id, inst.id);
  EXPECT_EQ(r.criteria_a.items, std::vector<std::string>{"concise responses"});
  EXPECT_EQ(r.criteria_b.items, std::vector<std::string>{"detailed responses"});
}

TEST(Extraction, ReasksThenFailsWithRawText) {
  providers::MockChatProvider chat = providers::MockChatProvider::fixed("bad", "no headings here");
  try {
    extract_criteria(instance(1, Label::win), chat, 2);
    FAIL() << "expected ExtractionError";
  } catch (const ExtractionError& e) {
    EXPECT_EQ(e.raw(), "no headings here");
  }
  EXPECT_EQ(chat.calls(), 3u);
}

TEST(Extraction, SecondAttemptCanSucceed) {
  int n = 0;
  providers::MockChatProvider chat("flaky", [&](const std::string&, const std::string&) {
    return ++n == 1 ? std::string("garbage") : std::string("A_PREFERRED\n- a\nB_PREFERRED\n- b\n");
  });
  EXPECT_NO_THROW(extract_criteria(instance(1, Label::win), chat));
  EXPECT_EQ(chat.calls(), 2u);
}

TEST(Extraction, PromptMentionsBothHeadingsAndResponses) {
  const auto inst = instance(3, Label::win);
  const auto p = render_extraction_prompt(inst);
  EXPECT_NE(p.find("A_PREFERRED"), std::string::npos);
  EXPECT_NE(p.find("B_PREFERRED"), std::string::npos);
  EXPECT_NE(p.find(inst.response_a), std::string::npos);
  EXPECT_NE(p.find(inst.response_b), std::string::npos);
}

TEST(Extraction, BatchRecordsFailuresAndStoreRoundTrips) {
  std::vector<PreferenceInstance> insts{instance(1, Label::win), instance(2, Label::lose)};
  providers::MockChatProvider chat("sel", [&](const std::string& prompt, const std::string&) {
    return prompt.find(insts[1].response_a) != std::string::npos
               ? std::string("nothing")
               : std::string("A_PREFERRED\n- a\nB_PREFERRED\n- b\n");
  });
  const auto batch = extract_all(insts, chat, 2);
  ASSERT_EQ(batch.results.size(), 1u);
  ASSERT_EQ(batch.failures.size(), 1u);
  EXPECT_EQ(batch.failures[0].instance_id, insts[1].id);
  TempDir dir;
  save_criteria_store(dir / "c.jsonl", batch.results);
  EXPECT_EQ(load_criteria_store(dir / "c.jsonl"), batch.results);
}

// ---------------------------------------------------------------- derivation

TEST(Derive, LabelsFollowSideRegardlessOfHumanLabel) {
  for (Label y : {Label::win, Label::lose, Label::tie}) {
    const auto inst = instance(1, y);
    auto [a, b] = derive_conditioned(inst, extraction(inst, {"x"}, {"y"}));
    EXPECT_EQ(a.y_c, 0);
    EXPECT_EQ(b.y_c, 1);
    if (y == Label::win) {
      EXPECT_EQ(a.subset_tag, SubsetTag::plus);
      EXPECT_EQ(b.subset_tag, SubsetTag::minus);
    } else if (y == Label::lose) {
      EXPECT_EQ(a.subset_tag, SubsetTag::minus);
      EXPECT_EQ(b.subset_tag, SubsetTag::plus);
    } else {
      EXPECT_EQ(a.subset_tag, SubsetTag::train);
    }
  }
}

TEST(Derive, MismatchedExtractionRejected) {
  const auto inst = instance(1, Label::win);
  auto e = extraction(instance(2, Label::win), {"x"}, {"y"});
  EXPECT_THROW(derive_conditioned(inst, e), ValidationError);
}

TEST(Partition, TenWinsGiveTenPlusTenMinus) {
  std::vector<ConditionedSample> samples;
  for (int i = 0; i < 10; ++i) {
    const auto inst = instance(i, Label::win);
    auto [a, b] = derive_conditioned(inst, extraction(inst, {"x"}, {"y"}));
    samples.push_back(a);
    samples.push_back(b);
  }
  const auto pm = partition_plus_minus(samples);
  EXPECT_EQ(pm.plus.size(), 10u);
  EXPECT_EQ(pm.minus.size(), 10u);
  EXPECT_TRUE(pm.tie_pool.empty());
}

TEST(Partition, TieGoesToPool) {
  const auto inst = instance(1, Label::tie);
  auto [a, b] = derive_conditioned(inst, extraction(inst, {"x"}, {"y"}));
  const std::vector<ConditionedSample> samples{a, b};
  const auto pm = partition_plus_minus(samples);
  EXPECT_EQ(pm.tie_pool.size(), 2u);
  EXPECT_TRUE(pm.plus.empty());
  EXPECT_TRUE(pm.minus.empty());
}

TEST(Partition, PlantedMixGivesSeventyNine) {
  std::vector<Label> labels;
  labels.insert(labels.end(), 38, Label::win);
  labels.insert(labels.end(), 21, Label::tie);
  labels.insert(labels.end(), 41, Label::lose);
  std::mt19937_64 rng(4);
  std::shuffle(labels.begin(), labels.end(), rng);
  std::vector<ConditionedSample> samples;
  for (int i = 0; i < 100; ++i) {
    const auto inst = instance(i, labels[static_cast<std::size_t>(i)]);
    auto [a, b] = derive_conditioned(inst, extraction(inst, {"x"}, {"y"}));
    samples.push_back(a);
    samples.push_back(b);
  }
  const auto pm = partition_plus_minus(samples);
  EXPECT_EQ(pm.plus.size(), 79u);
  EXPECT_EQ(pm.minus.size(), 79u);
  EXPECT_EQ(pm.tie_pool.size(), 42u);
}

// ---------------------------------------------------------------- noising

TEST(NoiseRemove, KeptCountInRangeOrderPreserved) {
  const auto s = sample_with(5);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = noise_remove(s, seed);
    const auto k = r.criteria.items.size();
    EXPECT_GE(k, 1u);
    EXPECT_LE(k, 4u);
    EXPECT_EQ(r.y_c, s.y_c);
    EXPECT_EQ(r.instance_id, s.instance_id);
    EXPECT_EQ(r.subset_tag, SubsetTag::minus_remove);
    EXPECT_EQ(r.origin.op, NoiseOp::remove);
    EXPECT_TRUE(std::is_sorted(r.criteria.items.begin(), r.criteria.items.end()));
  }
}

TEST(NoiseRemove, SingleCriterionIsFlagged) {
  const auto r = noise_remove(sample_with(1), 3);
  EXPECT_EQ(r.criteria.items.size(), 1u);
  EXPECT_TRUE(r.origin.not_noisable);
}

TEST(NoiseRemove, MonteCarloMeanKept) {
  // uniform{1..k-1}: mean k/2.
  for (std::size_t k : {4u, 5u}) {
    const auto s = sample_with(k);
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) total += static_cast<double>(noise_remove(s, seed).criteria.items.size());
    EXPECT_NEAR(total / 10000.0, static_cast<double>(k) / 2.0, 0.05) << "k=" << k;
  }
}

TEST(NoiseAdd, CountRangeAndMean) {
  const auto s = sample_with(4);
  const auto flipped = flipped_with(3);
  const auto pool = pool_of(4, 3);
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const auto r = noise_add(s, flipped, pool, seed);
    const auto k = r.criteria.items.size();
    ASSERT_GE(k, 5u);
    ASSERT_LE(k, 7u);
    EXPECT_TRUE(std::equal(s.criteria.items.begin(), s.criteria.items.end(), r.criteria.items.begin()));
    for (std::size_t i = 4; i < k; ++i) EXPECT_NE(r.criteria.cluster_ids[i], 10);
    total += static_cast<double>(k - 4);
  }
  EXPECT_NEAR(total / 10000.0, 2.0, 0.05);
}

TEST(NoiseAdd, NoEligibleClusterIsAnError) {
  const std::vector<ClusteredCriterion> pool{{"p", 10}, {"q", 10}};
  EXPECT_THROW(noise_add(sample_with(3), flipped_with(2), pool, 1), ValidationError);
}

TEST(NoiseAdd, ClampedToEligiblePool) {
  const std::vector<ClusteredCriterion> pool{{"only", 55}, {"blocked", 10}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = noise_add(sample_with(2), flipped_with(2), pool, seed);
    EXPECT_EQ(r.criteria.items.size(), 3u);
    EXPECT_EQ(r.criteria.items.back(), "only");
  }
}

TEST(NoiseReplace, KeepsCountAndMinority) {
  const auto s = sample_with(5);
  const auto flipped = flipped_with(4);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = noise_replace(s, flipped, seed);
    ASSERT_EQ(r.criteria.items.size(), 5u);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < 5; ++i) changed += r.criteria.items[i] != s.criteria.items[i];
    EXPECT_GE(changed, 1u);
    EXPECT_LE(changed, 2u);
    EXPECT_EQ(r.y_c, s.y_c);
  }
}

TEST(NoiseReplace, ShortSetsAreFlagged) {
  const auto r = noise_replace(sample_with(2), flipped_with(3), 1);
  EXPECT_TRUE(r.origin.not_noisable);
  EXPECT_EQ(r.criteria.items, sample_with(2).criteria.items);
}

TEST(NoiseReplace, ClampedToFlippedSize) {
  // k=4 allows at most one replacement; a single flipped item gives exactly one.
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = noise_replace(sample_with(4), flipped_with(1), seed);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < 4; ++i) changed += r.criteria.items[i] == "opposite 0";
    EXPECT_EQ(changed, 1u);
  }
}

TEST(Noise, DeterministicPerSeed) {
  const auto s = sample_with(6);
  EXPECT_EQ(noise_remove(s, 42), noise_remove(s, 42));
  EXPECT_EQ(noise_replace(s, flipped_with(3), 42), noise_replace(s, flipped_with(3), 42));
  EXPECT_NE(derive_seed(1, "x:a", NoiseOp::add), derive_seed(1, "x:a", NoiseOp::remove));
}

TEST(Noise, PoolIsDistinctAndSorted) {
  auto a = sample_with(3);
  auto b = sample_with(3);
  b.instance_id = "other";
  const std::vector<ConditionedSample> both{a, b};
  const auto pool = criteria_pool(both);
  EXPECT_EQ(pool.size(), 3u);
}

// ---------------------------------------------------------------- splits

TEST(Splits, TopicHoldoutOfFortyInstances) {
  auto c = corpus(100, 5, 3, 0);
  // Topics 0 and 1 hold 40 instances; add two ties in topic 0 that must be excluded.
  for (int i = 0; i < 2; ++i) {
    const auto inst = instance(1000 + i, Label::tie);
    auto e = extraction(inst, {"t1", "t2", "t3"}, {"u1", "u2", "u3"});
    e.criteria_a.cluster_ids = {0, 0, 0};
    e.criteria_b.cluster_ids = {1, 1, 1};
    auto [a, b] = derive_conditioned(inst, e);
    c.samples.push_back(a);
    c.samples.push_back(b);
    c.labels.topic_of_instance[inst.id] = 0;
  }
  const auto s = make_splits(c.samples, c.labels, {{0, 1}, {}}, {7, 0.1, false});
  EXPECT_EQ(s.t_plus.size(), 40u);
  EXPECT_EQ(s.t_minus.size(), 40u);
  EXPECT_EQ(s.t_minus_remove.size(), 40u);
  EXPECT_EQ(s.t_minus_add.size(), 40u);
  EXPECT_EQ(s.t_minus_replace.size(), 40u);
  EXPECT_EQ(s.excluded_ties.size(), 2u);
  EXPECT_EQ(ids_of(s.t_plus), ids_of(s.t_minus));
  for (const auto& m : s.t_minus) EXPECT_EQ(m.subset_tag, SubsetTag::minus);
  for (const auto& m : s.t_minus_replace) {
    EXPECT_EQ(m.subset_tag, SubsetTag::minus_replace);
    EXPECT_EQ(m.criteria.items.size(), 3u);
  }
}

TEST(Splits, ClassHoldoutAndPrecedence) {
  const auto c = corpus(90, 3, 3);
  const auto s = make_splits(c.samples, c.labels, {{0}, {1}}, {3, 0.1, false});
  // Topic 0 = i%3==0; class 1 instances are i%3==1 and are not in topic 0.
  EXPECT_EQ(s.t_plus.size(), 30u);
  EXPECT_EQ(s.c_plus.size(), 30u);
  EXPECT_EQ(s.train.size() + s.val.size(), 60u);
  std::set<std::string> all;
  for (const auto& sub : {ids_of(s.train), ids_of(s.val), ids_of(s.t_plus), ids_of(s.c_plus)}) {
    for (const auto& id : sub) EXPECT_TRUE(all.insert(id).second) << id;
  }
}

TEST(Splits, NineToOneByInstance) {
  const auto c = corpus(1000, 4, 2);
  const auto s = make_splits(c.samples, c.labels, {}, {11, 0.1, false});
  const auto train = ids_of(s.train);
  const auto val = ids_of(s.val);
  EXPECT_EQ(train.size(), 900u);
  EXPECT_EQ(val.size(), 100u);
  for (const auto& id : val) EXPECT_FALSE(train.contains(id));
  EXPECT_EQ(s.train.size(), 1800u);
}

TEST(Splits, UnknownHoldoutRejected) {
  const auto c = corpus(20, 2, 2);
  EXPECT_THROW(make_splits(c.samples, c.labels, {{9}, {}}, {}), ValidationError);
  EXPECT_THROW(make_splits(c.samples, c.labels, {{}, {9}}, {}), ValidationError);
}

TEST(Splits, UnlabeledInstanceRejected) {
  auto c = corpus(20, 2, 2);
  c.labels.topic_of_instance.erase(c.labels.topic_of_instance.begin());
  EXPECT_THROW(make_splits(c.samples, c.labels, {}, {}), ValidationError);
}

TEST(Splits, DeterministicAndManifestRoundTrips) {
  const auto c = corpus(200, 4, 3, 7);
  const SplitOptions opt{5, 0.1, true};
  const auto a = make_splits(c.samples, c.labels, {{1}, {2}}, opt);
  const auto b = make_splits(c.samples, c.labels, {{1}, {2}}, opt);
  TempDir dir;
  save_split_manifest(dir / "a.json", a);
  save_split_manifest(dir / "b.json", b);
  EXPECT_EQ(read_file(dir / "a.json"), read_file(dir / "b.json"));
  const auto loaded = load_split_manifest(dir / "a.json");
  for (const auto& [name, subset] : a.named()) EXPECT_EQ(loaded.by_name(name), *subset) << name;
  EXPECT_EQ(loaded.holdout, a.holdout);
  EXPECT_EQ(loaded.excluded_ties, a.excluded_ties);
}

TEST(Splits, AugmentationDoublesTrainAndKeepsLabels) {
  const auto c = corpus(100, 2, 2);
  const auto plain = make_splits(c.samples, c.labels, {}, {1, 0.1, false});
  const auto aug = make_splits(c.samples, c.labels, {}, {1, 0.1, true});
  EXPECT_EQ(aug.train.size(), 2 * plain.train.size());
  std::map<std::string, int> label_of;
  for (const auto& s : plain.train) label_of[s.sample_id()] = s.y_c;
  for (const auto& s : aug.train) {
    EXPECT_EQ(s.subset_tag, SubsetTag::train);
    if (s.origin.op == NoiseOp::none) {
      EXPECT_EQ(label_of.at(s.sample_id()), s.y_c);
    }
  }
}

TEST(Splits, ModalClassTieGoesToLowestId) {
  CriteriaSet c{{"a", "b", "c", "d"}, Side::a_preferred, {3, 5, 5, 3}};
  EXPECT_EQ(modal_class(c, {}), 3);
  EXPECT_EQ(modal_class(c, {{3, 7}, {5, 1}}), 1);
}

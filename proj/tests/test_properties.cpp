// Randomized invariants. Each test draws many cases from a fixed seed so
// failures reproduce.

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "prefboard/clustering/ari.hpp"
#include "prefboard/clustering/hdbscan.hpp"
#include "prefboard/core/text.hpp"
#include "prefboard/core/types.hpp"
#include "prefboard/crm/features.hpp"
#include "prefboard/crm/model.hpp"
#include "prefboard/interface/score_cache.hpp"
#include "prefboard/judging/judge.hpp"
#include "prefboard/judging/scripted.hpp"
#include "prefboard/leaderboard/kendall.hpp"
#include "prefboard/leaderboard/ranking.hpp"
#include "prefboard/leaderboard/win_rate.hpp"
#include "prefboard/mining/noising.hpp"

using namespace prefboard;

namespace {

std::vector<int> random_labels(std::size_t n, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(0, k - 1);
  std::vector<int> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::string random_word(std::mt19937_64& rng) {
  static const std::vector<std::string> words{"clear", "short", "  detailed", "kind\t", "accurate",
                                              "café", "café", "", "formal", "A b"};
  return words[rng() % words.size()];
}

}  // namespace

TEST(Property, AriSymmetricBoundedAndRelabelInvariant) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng() % 60;
    const auto a = random_labels(n, 1 + static_cast<int>(rng() % 6), rng);
    const auto b = random_labels(n, 1 + static_cast<int>(rng() % 6), rng);
    const double ab = clustering::adjusted_rand_index(a, b);
    EXPECT_EQ(ab, clustering::adjusted_rand_index(b, a));
    EXPECT_LE(ab, 1.0);
    EXPECT_GE(ab, -1.0);
    EXPECT_EQ(clustering::adjusted_rand_index(a, a), 1.0);
    auto relabeled = a;
    for (auto& x : relabeled) x = 100 - 7 * x;
    EXPECT_NEAR(clustering::adjusted_rand_index(relabeled, b), ab, 1e-12);
  }
}

TEST(Property, KendallSymmetricAndReversal) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + rng() % 15;
    std::vector<double> a(n), b(n), neg(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng() % 5);
      b[i] = static_cast<double>(rng() % 5);
      neg[i] = -a[i];
    }
    const auto ab = leaderboard::kendall_tau(a, b);
    const auto ba = leaderboard::kendall_tau(b, a);
    EXPECT_NEAR(ab.tau_b, ba.tau_b, 1e-12);
    EXPECT_LE(std::abs(ab.tau_b), 1.0 + 1e-12);
    EXPECT_GE(ab.p_value, 0.0);
    EXPECT_LE(ab.p_value, 1.0 + 1e-12);
    EXPECT_NEAR(leaderboard::kendall_tau(a, neg).tau_b, -leaderboard::kendall_tau(a, a).tau_b, 1e-12);
  }
}

TEST(Property, SwapAverageMirrors) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const double p = u(rng), q = u(rng);
    const double fwd = judging::combine_swap(p, q);
    const double rev = judging::combine_swap(q, p);
    EXPECT_NEAR(fwd + rev, 1.0, 1e-15);
    const double band = u(rng) * 0.49;
    const auto a = judging::resolve(fwd, band), b = judging::resolve(rev, band);
    if (a == judging::Preferred::tie) {
      EXPECT_EQ(b, judging::Preferred::tie);
    } else {
      EXPECT_NE(a, b);
      EXPECT_NE(b, judging::Preferred::tie);
    }
  }
}

TEST(Property, LabelReversalIsAnInvolution) {
  for (auto y : {Label::win, Label::tie, Label::lose}) EXPECT_EQ(reversed(reversed(y)), y);
  for (auto s : {Side::a_preferred, Side::b_preferred}) {
    EXPECT_EQ(opposite(opposite(s)), s);
    EXPECT_EQ(label_for_side(s) + label_for_side(opposite(s)), 1);
  }
}

TEST(Property, NoiseRemoveKeepsAnOrderedProperSubset) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 500; ++t) {
    ConditionedSample s;
    s.instance_id = "i" + std::to_string(t);
    s.criteria.side = Side::b_preferred;
    s.y_c = 1;
    s.subset_tag = SubsetTag::minus;
    const std::size_t k = 2 + rng() % 8;
    for (std::size_t i = 0; i < k; ++i) {
      s.criteria.items.push_back("c" + std::to_string(i));
      s.criteria.cluster_ids.push_back(static_cast<int>(i));
    }
    const auto out = mining::noise_remove(s, rng());
    ASSERT_GE(out.criteria.items.size(), 1u);
    ASSERT_LE(out.criteria.items.size(), k - 1);
    EXPECT_TRUE(std::includes(s.criteria.items.begin(), s.criteria.items.end(), out.criteria.items.begin(),
                              out.criteria.items.end()));
    EXPECT_EQ(out.criteria.items.size(), out.criteria.cluster_ids.size());
    EXPECT_EQ(out.y_c, s.y_c);
    EXPECT_EQ(out.instance_id, s.instance_id);
    EXPECT_EQ(out.subset_tag, SubsetTag::minus_remove);
  }
}

TEST(Property, CanonicalCriteriaIsIdempotentAndOrderFree) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    std::vector<std::string> c(rng() % 6);
    for (auto& x : c) x = random_word(rng);
    const auto once = interface::canonical_criteria(c);
    EXPECT_EQ(interface::canonical_criteria(once), once);
    EXPECT_TRUE(std::is_sorted(once.begin(), once.end()));
    auto shuffled = c;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(interface::canonical_criteria(shuffled), once);
  }
}

TEST(Property, TextNormalizationIsIdempotent) {
  std::mt19937_64 rng(6);
  const std::vector<std::string> pieces{"a", " ", "\r\n", "\r", "\n", "\t", "é", "é", "  x  "};
  for (int t = 0; t < 300; ++t) {
    std::string s;
    for (int i = 0; i < 8; ++i) s += pieces[rng() % pieces.size()];
    const auto c = text::canonical(s);
    EXPECT_EQ(text::canonical(c), c);
    EXPECT_EQ(c.find('\r'), std::string::npos);
    EXPECT_EQ(text::collapse_whitespace(text::collapse_whitespace(s)), text::collapse_whitespace(s));
  }
}

TEST(Property, CompetitionRankCountsStrictlyBetter) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    std::map<std::string, double> rates;
    const std::size_t n = 1 + rng() % 10;
    for (std::size_t i = 0; i < n; ++i) rates["m" + std::to_string(i)] = static_cast<double>(rng() % 5) * 12.5;
    const auto rows = leaderboard::rank_models(rates);
    ASSERT_EQ(rows.size(), n);
    for (std::size_t i = 0; i < n; ++i) {
      int better = 0;
      for (const auto& [name, r] : rates) better += r > rows[i].win_rate ? 1 : 0;
      EXPECT_EQ(rows[i].rank, better + 1);
      if (i > 0) {
        EXPECT_LE(rows[i - 1].rank, rows[i].rank);
      }
    }
  }
}

TEST(Property, WinRatesAgainstEachOtherSumTo100) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const std::size_t nq = 1 + rng() % 12;
    std::vector<leaderboard::BenchEntry> qs;
    leaderboard::ResponseStore store;
    for (std::size_t q = 0; q < nq; ++q) {
      const auto id = "q" + std::to_string(q);
      qs.push_back({id, 0, {{"user", "?"}}});
      store.put(id, "x", {std::string(1 + rng() % 5, 'x'), "t"});
      store.put(id, "y", {std::string(1 + rng() % 5, 'y'), "t"});
    }
    for (const char* name : {"length_lover", "random:3", "keyword_matcher"}) {
      auto j = judging::make_scripted(name);
      const double xy = leaderboard::win_rate("x", "y", *j, {"x"}, qs, store).percent;
      const double yx = leaderboard::win_rate("y", "x", *j, {"x"}, qs, store).percent;
      EXPECT_NEAR(xy + yx, 100.0, 1e-9) << name;
    }
  }
}

TEST(Property, PairwiseScoreIsAntisymmetric) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = 1 + rng() % 12;
    auto m = crm::CrmModel::zeros(crm::CrmMode::pairwise_cls, d);
    for (auto& w : m.weights) w = g(rng);
    std::vector<double> ec(d), eq(d), ea(d), eb(d);
    for (auto* v : {&ec, &eq, &ea, &eb})
      for (auto& x : *v) x = g(rng);
    const double l = g(rng);
    std::vector<double> f(crm::pair_feature_length(d)), r(f.size());
    crm::pair_features_from(ec, eq, ea, eb, l, f);
    crm::pair_features_from(ec, eq, eb, ea, -l, r);
    EXPECT_NEAR(crm::raw_score(m, f), -crm::raw_score(m, r), 1e-12);
  }
}

TEST(Property, HdbscanLabelsAreContiguous) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 5 + rng() % 80, d = 2 + rng() % 5;
    DenseMatrix m(n, d);
    for (auto& x : m.data()) x = g(rng);
    clustering::HdbscanParams p;
    p.min_cluster_size = 2 + rng() % 10;
    const auto l = clustering::hdbscan(m, p);
    EXPECT_NO_THROW(l.validate());
    EXPECT_EQ(l.labels.size(), n);
    std::set<int> seen(l.labels.begin(), l.labels.end());
    seen.erase(clustering::kNoise);
    EXPECT_EQ(static_cast<int>(seen.size()), l.cluster_count());
  }
}

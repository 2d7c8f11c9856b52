#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "prefboard/core/matrix.hpp"
#include "prefboard/kernels/kernels.hpp"

using namespace prefboard;
using kernels::Execution;

namespace {

DenseMatrix random_unit_rows(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  DenseMatrix m(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : m.row(i)) x = g(rng);
    l2_normalize(m.row(i));
  }
  return m;
}

double dist(const DenseMatrix& m, std::size_t a, std::size_t b) {
  return kernels::cosine_distance_unit(m.row(a), m.row(b));
}

// Kruskal over all pairs with mutual reachability weights.
double kruskal_weight(const DenseMatrix& m, const std::vector<double>& core) {
  const std::size_t n = m.rows();
  struct E {
    double w;
    std::size_t a, b;
  };
  std::vector<E> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      edges.push_back({std::max({core[i], core[j], dist(m, i, j)}), i, j});
  std::sort(edges.begin(), edges.end(), [](const E& x, const E& y) { return x.w < y.w; });
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  double total = 0.0;
  for (const auto& e : edges) {
    auto ra = find(e.a), rb = find(e.b);
    if (ra != rb) {
      parent[ra] = rb;
      total += e.w;
    }
  }
  return total;
}

}  // namespace

TEST(Kernels, CoreDistancesMatchSortOracle) {
  const auto m = random_unit_rows(60, 6, 1);
  for (std::size_t k : {1u, 3u, 10u}) {
    const auto got = kernels::core_distances(m, k, Execution::serial);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      std::vector<double> d;
      for (std::size_t j = 0; j < m.rows(); ++j) d.push_back(i == j ? 0.0 : dist(m, i, j));
      std::sort(d.begin(), d.end());
      EXPECT_DOUBLE_EQ(got[i], d[k - 1]);
    }
  }
}

TEST(Kernels, CoreDistancesSerialEqualsParallel) {
  const auto m = random_unit_rows(200, 5, 2);
  EXPECT_EQ(kernels::core_distances(m, 7, Execution::serial),
            kernels::core_distances(m, 7, Execution::parallel));
}

TEST(Kernels, MstHasMinimumWeight) {
  const auto m = random_unit_rows(40, 4, 3);
  const auto core = kernels::core_distances(m, 4, Execution::serial);
  const auto mst = kernels::mutual_reachability_mst(m, core, Execution::serial);
  ASSERT_EQ(mst.size(), m.rows() - 1);
  double total = 0.0;
  for (const auto& e : mst) total += e.weight;
  EXPECT_NEAR(total, kruskal_weight(m, core), 1e-12);
}

TEST(Kernels, MstSerialEqualsParallel) {
  const auto m = random_unit_rows(150, 5, 4);
  const auto core = kernels::core_distances(m, 5, Execution::parallel);
  const auto s = kernels::mutual_reachability_mst(m, core, Execution::serial);
  const auto p = kernels::mutual_reachability_mst(m, core, Execution::parallel);
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].a, p[i].a);
    EXPECT_EQ(s[i].b, p[i].b);
    EXPECT_EQ(s[i].weight, p[i].weight);
  }
}

TEST(Kernels, RowDotsSerialEqualsParallelAndOracle) {
  const auto m = random_unit_rows(300, 9, 5);
  std::vector<double> w(9);
  std::iota(w.begin(), w.end(), -4.0);
  std::vector<double> s(300), p(300);
  kernels::row_dots(m, w, s, Execution::serial);
  kernels::row_dots(m, w, p, Execution::parallel);
  EXPECT_EQ(s, p);
  for (std::size_t i = 0; i < 300; ++i) EXPECT_DOUBLE_EQ(s[i], dot(m.row(i), w));
}

TEST(Kernels, AssignNearestMatchesBruteForce) {
  const auto pts = random_unit_rows(120, 3, 6);
  const auto cents = random_unit_rows(5, 3, 7);
  std::vector<int> ls(120), lp(120);
  std::vector<double> ds(120), dp(120);
  const double is = kernels::assign_nearest(pts, cents, ls, ds, Execution::serial);
  const double ip = kernels::assign_nearest(pts, cents, lp, dp, Execution::parallel);
  EXPECT_EQ(ls, lp);
  EXPECT_EQ(ds, dp);
  EXPECT_EQ(is, ip);
  double total = 0.0;
  for (std::size_t i = 0; i < 120; ++i) {
    double best = 1e300;
    int arg = -1;
    for (std::size_t c = 0; c < 5; ++c) {
      double sq = 0.0;
      for (std::size_t j = 0; j < 3; ++j) sq += (pts(i, j) - cents(c, j)) * (pts(i, j) - cents(c, j));
      if (sq < best) {
        best = sq;
        arg = static_cast<int>(c);
      }
    }
    EXPECT_EQ(ls[i], arg);
    total += best;
  }
  EXPECT_NEAR(is, total, 1e-12);
}

TEST(Kernels, AssignNearestTiesGoToLowerIndex) {
  const auto pts = DenseMatrix::from_rows({{0.0, 0.0}});
  const auto cents = DenseMatrix::from_rows({{1.0, 0.0}, {-1.0, 0.0}});
  std::vector<int> l(1);
  std::vector<double> d(1);
  kernels::assign_nearest(pts, cents, l, d, Execution::parallel);
  EXPECT_EQ(l[0], 0);
}

TEST(Kernels, CosineDistanceClampsAtZero) {
  std::vector<double> a{1.0, 0.0};
  EXPECT_EQ(kernels::cosine_distance_unit(a, a), 0.0);
  std::vector<double> b{-1.0, 0.0};
  EXPECT_DOUBLE_EQ(kernels::cosine_distance_unit(a, b), 2.0);
}

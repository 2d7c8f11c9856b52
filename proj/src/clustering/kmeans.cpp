#include "prefboard/clustering/kmeans.hpp"

#include <algorithm>
#include <random>

#include "prefboard/core/error.hpp"

namespace prefboard::clustering {

namespace {

double sq_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

DenseMatrix plus_plus(const DenseMatrix& points, std::size_t k, std::mt19937_64& rng) {
  const auto n = points.rows();
  DenseMatrix centroids(k, points.cols());
  std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  std::copy(points.row(first).begin(), points.row(first).end(), centroids.row(0).begin());
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = sq_distance(points.row(i), centroids.row(0));
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double x : d2) total += x;
    std::size_t pick;
    if (total > 0.0) {
      std::discrete_distribution<std::size_t> dist(d2.begin(), d2.end());
      pick = dist(rng);
    } else {
      pick = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    }
    std::copy(points.row(pick).begin(), points.row(pick).end(), centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_distance(points.row(i), centroids.row(c)));
    }
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                    int max_iterations, kernels::Execution exec) {
  const auto n = points.rows();
  if (k == 0) throw ValidationError("k must be at least 1");
  if (k > n) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds the " + std::to_string(n) +
                          " points");
  }
  std::mt19937_64 rng(seed);
  KMeansResult out;
  out.centroids = plus_plus(points, k, rng);
  std::vector<int> labels(n, -1);
  std::vector<int> next(n);
  std::vector<double> d2(n);

  for (int it = 0; it < max_iterations; ++it) {
    out.inertia_history.push_back(kernels::assign_nearest(points, out.centroids, next, d2, exec));
    out.iterations = it + 1;
    if (next == labels) break;
    labels = next;

    DenseMatrix sums(k, points.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      auto dst = sums.row(c);
      const auto src = points.row(i);
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
      ++counts[c];
    }
    std::vector<bool> taken(n, false);
    for (std::size_t c = 0; c < k; ++c) {
      auto dst = out.centroids.row(c);
      if (counts[c] > 0) {
        for (std::size_t j = 0; j < dst.size(); ++j) {
          dst[j] = sums(c, j) / static_cast<double>(counts[c]);
        }
        continue;
      }
      // Farthest point from its current centroid, not already used for a re-seed.
      std::size_t far = 0;
      double best = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!taken[i] && d2[i] > best) {
          best = d2[i];
          far = i;
        }
      }
      taken[far] = true;
      std::copy(points.row(far).begin(), points.row(far).end(), dst.begin());
    }
  }
  out.labeling.labels = labels;
  return out;
}

}  // namespace prefboard::clustering

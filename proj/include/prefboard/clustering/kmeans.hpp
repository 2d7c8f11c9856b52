#pragma once

#include <cstdint>
#include <vector>

#include "prefboard/clustering/hdbscan.hpp"
#include "prefboard/core/matrix.hpp"
#include "prefboard/kernels/kernels.hpp"

namespace prefboard::clustering {

struct KMeansResult {
  ClusterLabeling labeling;
  DenseMatrix centroids;
  /// Inertia after each assignment step.
  std::vector<double> inertia_history;
  int iterations = 0;

  double inertia() const { return inertia_history.empty() ? 0.0 : inertia_history.back(); }
};

/// k-means++ seeding then Lloyd iterations until the assignment stops
/// changing or `max_iterations` is reached. An emptied cluster is re-seeded at
/// the point farthest from its centroid. Throws ValidationError when k is 0
/// or exceeds the number of points.
KMeansResult kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                    int max_iterations = 300,
                    kernels::Execution exec = kernels::Execution::parallel);

}  // namespace prefboard::clustering

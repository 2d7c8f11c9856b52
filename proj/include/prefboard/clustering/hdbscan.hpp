#pragma once

#include <cstddef>
#include <vector>

#include "prefboard/core/matrix.hpp"
#include "prefboard/kernels/kernels.hpp"

namespace prefboard::clustering {

inline constexpr int kNoise = -1;

/// Per-point cluster labels, contiguous 0..k-1, with kNoise for outliers.
struct ClusterLabeling {
  std::vector<int> labels;

  int cluster_count() const noexcept;
  std::size_t noise_count() const noexcept;
  /// Member indices of each cluster, by label.
  std::vector<std::vector<std::size_t>> members() const;
  /// Throws ValidationError unless labels are contiguous from 0 plus kNoise.
  void validate() const;
};

/// Renumbers labels in order of first appearance so the result is
/// contiguous; kNoise is kept.
ClusterLabeling canonical_labels(std::vector<int> labels);

struct HdbscanParams {
  std::size_t min_cluster_size = 20;
  std::size_t min_samples = 0;  // 0 means min_cluster_size
  kernels::Execution exec = kernels::Execution::parallel;
};

/// One row of the condensed tree: `child` is a point (< n) or a cluster (>= n).
struct CondensedEdge {
  std::size_t parent = 0;
  std::size_t child = 0;
  double lambda = 0.0;
  std::size_t size = 0;
};

struct HdbscanResult {
  ClusterLabeling labeling;
  std::vector<double> core;
  std::vector<kernels::WeightedEdge> mst;
  std::vector<CondensedEdge> condensed;
  std::vector<std::size_t> selected;  // condensed cluster ids chosen by excess of mass
};

/// Density clustering with cosine distance. Rows are re-normalized first.
/// Core distance counts the point itself among its min_samples neighbors.
/// Cluster selection is excess of mass with the root excluded.
HdbscanResult hdbscan_detailed(const DenseMatrix& rows, const HdbscanParams& params);

ClusterLabeling hdbscan(const DenseMatrix& rows, const HdbscanParams& params = {});

}  // namespace prefboard::clustering

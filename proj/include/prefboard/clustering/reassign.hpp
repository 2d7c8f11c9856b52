#pragma once

#include <string>
#include <vector>

#include "prefboard/clustering/hdbscan.hpp"
#include "prefboard/core/matrix.hpp"

namespace prefboard::clustering {

enum class ReassignStrategy { ctfidf_conservative, distribution_comprehensive };

/// Gives outliers a cluster.
///  - ctfidf_conservative: compares the outlier's c-TF-IDF vector with each
///    cluster's by cosine; assigns the best cluster only when the similarity
///    reaches `threshold`. Needs `docs`.
///  - distribution_comprehensive: every outlier joins the cluster whose mean
///    embedding is most cosine-similar. Needs `embeddings`.
/// Ties go to the lower cluster id. Throws ValidationError when there is no
/// cluster at all.
ClusterLabeling reassign_outliers(const std::vector<std::string>& docs,
                                  const DenseMatrix& embeddings, const ClusterLabeling& labeling,
                                  ReassignStrategy strategy, double threshold = 0.1);

/// Mean row of each cluster.
DenseMatrix cluster_centroids(const DenseMatrix& rows, const ClusterLabeling& labeling);

}  // namespace prefboard::clustering

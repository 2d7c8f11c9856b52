#include "prefboard/clustering/reassign.hpp"

#include <map>

#include "prefboard/clustering/ctfidf.hpp"
#include "prefboard/core/error.hpp"

namespace prefboard::clustering {

DenseMatrix cluster_centroids(const DenseMatrix& rows, const ClusterLabeling& labeling) {
  const auto k = static_cast<std::size_t>(labeling.cluster_count());
  DenseMatrix out(k, rows.cols());
  std::vector<double> counts(k, 0.0);
  for (std::size_t i = 0; i < labeling.labels.size(); ++i) {
    const int l = labeling.labels[i];
    if (l == kNoise) continue;
    auto dst = out.row(static_cast<std::size_t>(l));
    const auto src = rows.row(i);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    counts[static_cast<std::size_t>(l)] += 1.0;
  }
  for (std::size_t c = 0; c < k; ++c) {
    for (double& x : out.row(c)) x /= counts[c];
  }
  return out;
}

namespace {

/// Index of the best-scoring candidate; the first one wins ties.
template <typename Score>
std::pair<int, double> argmax(std::size_t k, Score score) {
  int best = kNoise;
  double best_s = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double s = score(c);
    if (best == kNoise || s > best_s) {
      best = static_cast<int>(c);
      best_s = s;
    }
  }
  return {best, best_s};
}

}  // namespace

ClusterLabeling reassign_outliers(const std::vector<std::string>& docs,
                                  const DenseMatrix& embeddings, const ClusterLabeling& labeling,
                                  ReassignStrategy strategy, double threshold) {
  const auto k = static_cast<std::size_t>(labeling.cluster_count());
  if (k == 0) throw ValidationError("outlier reassignment needs at least one cluster");
  ClusterLabeling out = labeling;
  const auto n = labeling.labels.size();

  if (strategy == ReassignStrategy::ctfidf_conservative) {
    if (docs.size() != n) throw ValidationError("one document per point is required");
    if (k < 2) {
      // c-TF-IDF needs two classes; with one cluster the idf has no contrast,
      // so a shared term is the only evidence available.
      std::map<int, std::vector<std::string>> single{{0, {}}, {1, {""}}};
      for (std::size_t i = 0; i < n; ++i) {
        if (labeling.labels[i] == 0) single[0].push_back(docs[i]);
      }
      const Ctfidf model(single);
      for (std::size_t i = 0; i < n; ++i) {
        if (labeling.labels[i] != kNoise) continue;
        if (cosine_similarity(model.transform(docs[i]), model.class_vector(0)) >= threshold) {
          out.labels[i] = 0;
        }
      }
      return out;
    }
    std::map<int, std::vector<std::string>> by_class;
    for (std::size_t i = 0; i < n; ++i) {
      if (labeling.labels[i] != kNoise) by_class[labeling.labels[i]].push_back(docs[i]);
    }
    const Ctfidf model(by_class);
    for (std::size_t i = 0; i < n; ++i) {
      if (labeling.labels[i] != kNoise) continue;
      const auto v = model.transform(docs[i]);
      const auto [best, sim] = argmax(k, [&](std::size_t c) {
        return cosine_similarity(v, model.class_vector(static_cast<int>(c)));
      });
      if (sim >= threshold && sim > 0.0) out.labels[i] = best;
    }
    return out;
  }

  if (embeddings.rows() != n) throw ValidationError("one embedding per point is required");
  const auto centroids = cluster_centroids(embeddings, labeling);
  for (std::size_t i = 0; i < n; ++i) {
    if (labeling.labels[i] != kNoise) continue;
    out.labels[i] = argmax(k, [&](std::size_t c) {
                      return cosine_similarity(embeddings.row(i), centroids.row(c));
                    }).first;
  }
  return out;
}

}  // namespace prefboard::clustering

#pragma once

// Data-parallel inner loops used by clustering, training and judging. Every
// kernel has a serial reference and an OpenMP variant; both produce
// bit-identical output because per-item work is independent and reductions
// are done serially in index order (or as index-tie-broken argmins).

#include <cstddef>
#include <span>
#include <vector>

#include "prefboard/core/matrix.hpp"

namespace prefboard::kernels {

enum class Execution { serial, parallel };

/// True when the build has OpenMP.
bool parallel_available() noexcept;
int max_threads() noexcept;

/// Cosine distance 1 - <a,b> for unit vectors, clamped at 0.
inline double cosine_distance_unit(std::span<const double> a, std::span<const double> b) noexcept {
  const double d = 1.0 - dot(a, b);
  return d < 0.0 ? 0.0 : d;
}

/// Distance from each row to its k-th nearest row (the row itself counts as
/// the first neighbor). Rows must be unit length. Requires 1 <= k <= rows.
std::vector<double> core_distances(const DenseMatrix& unit_rows, std::size_t k, Execution exec);

struct WeightedEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
};

/// Prim's minimum spanning tree over the complete graph with mutual
/// reachability weights max(core[a], core[b], d(a, b)). O(n^2) time, O(n)
/// memory; distances are computed on the fly. Edges come out in insertion
/// order; ties between candidate vertices go to the lower index.
std::vector<WeightedEdge> mutual_reachability_mst(const DenseMatrix& unit_rows,
                                                  std::span<const double> core, Execution exec);

/// out[i] = <rows[i], w>.
void row_dots(const DenseMatrix& rows, std::span<const double> w, std::span<double> out,
              Execution exec);

/// Squared-Euclidean nearest centroid per row; ties go to the lower centroid
/// index. Returns the summed squared distance (inertia).
double assign_nearest(const DenseMatrix& points, const DenseMatrix& centroids,
                      std::span<int> labels, std::span<double> sq_dist, Execution exec);

}  // namespace prefboard::kernels

#include "prefboard/kernels/kernels.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace prefboard::kernels {

bool parallel_available() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

double kth_distance(const DenseMatrix& pts, std::size_t i, std::size_t k, std::vector<double>& buf) {
  const std::size_t n = pts.rows();
  buf.resize(n);
  const auto pi = pts.row(i);
  for (std::size_t j = 0; j < n; ++j) buf[j] = j == i ? 0.0 : cosine_distance_unit(pi, pts.row(j));
  auto nth = buf.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(buf.begin(), nth, buf.end());
  return *nth;
}

std::vector<double> core_distances_serial(const DenseMatrix& pts, std::size_t k) {
  std::vector<double> core(pts.rows());
  std::vector<double> buf;
  for (std::size_t i = 0; i < pts.rows(); ++i) core[i] = kth_distance(pts, i, k, buf);
  return core;
}

std::vector<double> core_distances_parallel(const DenseMatrix& pts, std::size_t k) {
  std::vector<double> core(pts.rows());
  const auto n = static_cast<std::ptrdiff_t>(pts.rows());
#pragma omp parallel
  {
    std::vector<double> buf;
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      core[static_cast<std::size_t>(i)] = kth_distance(pts, static_cast<std::size_t>(i), k, buf);
    }
  }
  return core;
}

struct Candidate {
  double weight = std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();

  bool better_than(const Candidate& o) const noexcept {
    return weight < o.weight || (weight == o.weight && index < o.index);
  }
};

inline void relax(const DenseMatrix& pts, std::span<const double> core, std::size_t current,
                  std::size_t j, std::vector<double>& best, std::vector<std::size_t>& parent) {
  const double d = std::max({core[current], core[j], cosine_distance_unit(pts.row(current), pts.row(j))});
  if (d < best[j]) {
    best[j] = d;
    parent[j] = current;
  }
}

std::vector<WeightedEdge> mst_serial(const DenseMatrix& pts, std::span<const double> core) {
  const std::size_t n = pts.rows();
  std::vector<WeightedEdge> edges;
  if (n < 2) return edges;
  edges.reserve(n - 1);
  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, 0);
  std::size_t current = 0;
  in_tree[0] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    Candidate pick;
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      relax(pts, core, current, j, best, parent);
      const Candidate c{best[j], j};
      if (c.better_than(pick)) pick = c;
    }
    edges.push_back({parent[pick.index], pick.index, pick.weight});
    in_tree[pick.index] = 1;
    current = pick.index;
  }
  return edges;
}

std::vector<WeightedEdge> mst_parallel(const DenseMatrix& pts, std::span<const double> core) {
  const std::size_t n = pts.rows();
  std::vector<WeightedEdge> edges;
  if (n < 2) return edges;
  edges.reserve(n - 1);
  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, 0);
  std::vector<Candidate> per_thread(static_cast<std::size_t>(max_threads()));
  std::size_t current = 0;
  in_tree[0] = 1;
  const auto sn = static_cast<std::ptrdiff_t>(n);
  for (std::size_t step = 1; step < n; ++step) {
    std::fill(per_thread.begin(), per_thread.end(), Candidate{});
#pragma omp parallel
    {
      Candidate local;
#pragma omp for schedule(static) nowait
      for (std::ptrdiff_t sj = 0; sj < sn; ++sj) {
        const auto j = static_cast<std::size_t>(sj);
        if (in_tree[j]) continue;
        relax(pts, core, current, j, best, parent);
        const Candidate c{best[j], j};
        if (c.better_than(local)) local = c;
      }
#ifdef _OPENMP
      per_thread[static_cast<std::size_t>(omp_get_thread_num())] = local;
#else
      per_thread[0] = local;
#endif
    }
    Candidate pick;
    for (const auto& c : per_thread) {
      if (c.better_than(pick)) pick = c;
    }
    edges.push_back({parent[pick.index], pick.index, pick.weight});
    in_tree[pick.index] = 1;
    current = pick.index;
  }
  return edges;
}

}  // namespace

std::vector<double> core_distances(const DenseMatrix& unit_rows, std::size_t k, Execution exec) {
  if (k == 0 || k > unit_rows.rows()) throw std::invalid_argument("core_distances: k out of range");
  return exec == Execution::parallel ? core_distances_parallel(unit_rows, k)
                                     : core_distances_serial(unit_rows, k);
}

std::vector<WeightedEdge> mutual_reachability_mst(const DenseMatrix& unit_rows,
                                                  std::span<const double> core, Execution exec) {
  if (core.size() != unit_rows.rows()) throw std::invalid_argument("core distance count mismatch");
  return exec == Execution::parallel ? mst_parallel(unit_rows, core) : mst_serial(unit_rows, core);
}

void row_dots(const DenseMatrix& rows, std::span<const double> w, std::span<double> out,
              Execution exec) {
  if (w.size() != rows.cols() || out.size() != rows.rows()) {
    throw std::invalid_argument("row_dots: shape mismatch");
  }
  const auto n = static_cast<std::ptrdiff_t>(rows.rows());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = dot(rows.row(static_cast<std::size_t>(i)), w);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] = dot(rows.row(static_cast<std::size_t>(i)), w);
    }
  }
}

namespace {
inline void nearest_one(const DenseMatrix& points, const DenseMatrix& centroids, std::size_t i,
                        std::span<int> labels, std::span<double> sq_dist) {
  const auto p = points.row(i);
  double best = std::numeric_limits<double>::infinity();
  int best_c = 0;
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const auto q = centroids.row(c);
    double d = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double diff = p[k] - q[k];
      d += diff * diff;
    }
    if (d < best) {
      best = d;
      best_c = static_cast<int>(c);
    }
  }
  labels[i] = best_c;
  sq_dist[i] = best;
}
}  // namespace

double assign_nearest(const DenseMatrix& points, const DenseMatrix& centroids,
                      std::span<int> labels, std::span<double> sq_dist, Execution exec) {
  if (centroids.cols() != points.cols() || labels.size() != points.rows() ||
      sq_dist.size() != points.rows() || centroids.rows() == 0) {
    throw std::invalid_argument("assign_nearest: shape mismatch");
  }
  const auto n = static_cast<std::ptrdiff_t>(points.rows());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      nearest_one(points, centroids, static_cast<std::size_t>(i), labels, sq_dist);
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      nearest_one(points, centroids, static_cast<std::size_t>(i), labels, sq_dist);
    }
  }
  double inertia = 0.0;
  for (double d : sq_dist) inertia += d;
  return inertia;
}

}  // namespace prefboard::kernels

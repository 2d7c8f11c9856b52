#include "prefboard/clustering/hdbscan.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "prefboard/core/error.hpp"

namespace prefboard::clustering {

int ClusterLabeling::cluster_count() const noexcept {
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  return k;
}

std::size_t ClusterLabeling::noise_count() const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), kNoise));
}

std::vector<std::vector<std::size_t>> ClusterLabeling::members() const {
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(cluster_count()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kNoise) out[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  return out;
}

void ClusterLabeling::validate() const {
  const int k = cluster_count();
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (int l : labels) {
    if (l < kNoise) throw ValidationError("cluster label below -1");
    if (l != kNoise) seen[static_cast<std::size_t>(l)] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ValidationError("cluster labels are not contiguous");
  }
}

ClusterLabeling canonical_labels(std::vector<int> labels) {
  std::map<int, int> remap;
  for (int& l : labels) {
    if (l == kNoise) continue;
    auto [it, inserted] = remap.try_emplace(l, static_cast<int>(remap.size()));
    l = it->second;
  }
  return ClusterLabeling{std::move(labels)};
}

namespace {

/// Single-linkage merge: children are points (< n) or earlier merges (n + i).
struct Merge {
  std::size_t left;
  std::size_t right;
  double distance;
  std::size_t size;
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  std::size_t size(std::size_t root) const { return size_[root]; }
  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return a;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

std::vector<Merge> single_linkage(std::size_t n, std::vector<kernels::WeightedEdge> edges) {
  std::stable_sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) {
    if (x.weight != y.weight) return x.weight < y.weight;
    return std::minmax(x.a, x.b) < std::minmax(y.a, y.b);
  });
  UnionFind uf(n);
  std::vector<std::size_t> node_of(n);  // union-find root -> dendrogram node
  std::iota(node_of.begin(), node_of.end(), 0);
  std::vector<Merge> merges;
  merges.reserve(n - 1);
  for (const auto& e : edges) {
    const auto ra = uf.find(e.a);
    const auto rb = uf.find(e.b);
    const std::size_t size = uf.size(ra) + uf.size(rb);
    merges.push_back({node_of[ra], node_of[rb], e.weight, size});
    node_of[uf.unite(ra, rb)] = n + merges.size() - 1;
  }
  return merges;
}

double lambda_of(double distance) {
  constexpr double kFloor = 1e-12;
  return 1.0 / std::max(distance, kFloor);
}

std::vector<CondensedEdge> condense(std::size_t n, const std::vector<Merge>& merges,
                                    std::size_t min_cluster_size) {
  auto size_of = [&](std::size_t node) { return node < n ? std::size_t{1} : merges[node - n].size; };
  auto points_under = [&](std::size_t node) {
    std::vector<std::size_t> pts;
    std::vector<std::size_t> stack{node};
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      if (x < n) {
        pts.push_back(x);
      } else {
        stack.push_back(merges[x - n].left);
        stack.push_back(merges[x - n].right);
      }
    }
    std::sort(pts.begin(), pts.end());
    return pts;
  };

  std::vector<CondensedEdge> out;
  const std::size_t root = 2 * n - 2;
  std::size_t next_label = n + 1;
  // Work list of (dendrogram node, condensed cluster it belongs to), breadth first.
  std::vector<std::pair<std::size_t, std::size_t>> queue{{root, n}};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const auto [node, label] = queue[qi];
    if (node < n) continue;
    const auto& m = merges[node - n];
    const double lambda = lambda_of(m.distance);
    const bool left_big = size_of(m.left) >= min_cluster_size;
    const bool right_big = size_of(m.right) >= min_cluster_size;
    if (left_big && right_big) {
      for (auto child : {m.left, m.right}) {
        out.push_back({label, next_label, lambda, size_of(child)});
        queue.push_back({child, next_label++});
      }
      continue;
    }
    for (auto child : {m.left, m.right}) {
      if (size_of(child) >= min_cluster_size) {
        queue.push_back({child, label});  // the cluster continues under the same label
      } else {
        for (auto p : points_under(child)) out.push_back({label, p, lambda, 1});
      }
    }
  }
  return out;
}

std::vector<std::size_t> select_eom(std::size_t n, const std::vector<CondensedEdge>& tree) {
  std::map<std::size_t, double> birth{{n, 0.0}};
  std::map<std::size_t, std::vector<std::size_t>> children;
  for (const auto& e : tree) {
    if (e.child >= n) {
      birth[e.child] = e.lambda;
      children[e.parent].push_back(e.child);
    }
  }
  std::map<std::size_t, double> stability;
  for (const auto& [c, b] : birth) stability[c] = 0.0;
  for (const auto& e : tree) {
    stability[e.parent] += (e.lambda - birth[e.parent]) * static_cast<double>(e.size);
  }

  std::map<std::size_t, bool> chosen;
  for (const auto& [c, s] : stability) chosen[c] = c != n;
  // Children always carry larger ids than parents, so descending id order
  // visits every subtree before its root.
  for (auto it = stability.rbegin(); it != stability.rend(); ++it) {
    const auto c = it->first;
    if (c == n) continue;
    double child_sum = 0.0;
    for (auto ch : children[c]) child_sum += stability[ch];
    if (!children[c].empty() && child_sum > it->second) {
      chosen[c] = false;
      it->second = child_sum;
    } else {
      std::vector<std::size_t> stack(children[c]);
      while (!stack.empty()) {
        const auto x = stack.back();
        stack.pop_back();
        chosen[x] = false;
        for (auto ch : children[x]) stack.push_back(ch);
      }
    }
  }
  std::vector<std::size_t> out;
  for (const auto& [c, on] : chosen) {
    if (on) out.push_back(c);
  }
  return out;
}

}  // namespace

HdbscanResult hdbscan_detailed(const DenseMatrix& rows, const HdbscanParams& params) {
  const std::size_t n = rows.rows();
  const std::size_t mcs = params.min_cluster_size;
  const std::size_t ms = params.min_samples == 0 ? mcs : params.min_samples;
  if (mcs < 2) throw ValidationError("min_cluster_size must be at least 2");

  HdbscanResult out;
  out.labeling.labels.assign(n, kNoise);
  if (n < mcs || n < ms + 1) return out;

  DenseMatrix unit = rows;
  for (std::size_t i = 0; i < n; ++i) l2_normalize(unit.row(i));

  out.core = kernels::core_distances(unit, ms, params.exec);
  out.mst = kernels::mutual_reachability_mst(unit, out.core, params.exec);
  const auto merges = single_linkage(n, out.mst);
  out.condensed = condense(n, merges, mcs);
  out.selected = select_eom(n, out.condensed);

  std::map<std::size_t, std::vector<std::size_t>> children;
  for (const auto& e : out.condensed) children[e.parent].push_back(e.child);
  std::vector<int> raw(n, kNoise);
  for (std::size_t k = 0; k < out.selected.size(); ++k) {
    std::vector<std::size_t> stack{out.selected[k]};
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      if (x < n) {
        raw[x] = static_cast<int>(k);
      } else {
        for (auto ch : children[x]) stack.push_back(ch);
      }
    }
  }
  out.labeling = canonical_labels(std::move(raw));
  return out;
}

ClusterLabeling hdbscan(const DenseMatrix& rows, const HdbscanParams& params) {
  return hdbscan_detailed(rows, params).labeling;
}

}  // namespace prefboard::clustering

#include "prefboard/clustering/ari.hpp"

#include <map>

#include "prefboard/core/error.hpp"

namespace prefboard::clustering {

namespace {
double pairs(double x) { return x * (x - 1.0) / 2.0; }
}  // namespace

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw ValidationError("labelings differ in length");
  if (a.size() < 2) throw ValidationError("ARI needs at least two points");
  std::map<std::pair<int, int>, double> table;
  std::map<int, double> rows;
  std::map<int, double> cols;
  for (std::size_t i = 0; i < a.size(); ++i) {
    table[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  double index = 0.0;
  for (const auto& [key, c] : table) index += pairs(c);
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (const auto& [key, c] : rows) sum_a += pairs(c);
  for (const auto& [key, c] : cols) sum_b += pairs(c);
  // Scaled by the total pair count so small tables stay in exact integers.
  const double total = pairs(static_cast<double>(a.size()));
  const double num = index * total - sum_a * sum_b;
  const double den = 0.5 * (sum_a + sum_b) * total - sum_a * sum_b;
  if (den == 0.0) return 1.0;
  return num / den;
}

}  // namespace prefboard::clustering

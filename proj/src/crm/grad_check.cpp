#include "prefboard/crm/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "prefboard/core/error.hpp"

namespace prefboard::crm {

GradCheckResult grad_check(std::span<const double> w, const TrainSet& set, std::size_t i,
                           double l2, double h, std::size_t n_coords, std::uint64_t seed) {
  if (i >= set.size()) throw ValidationError("grad_check example index out of range");
  if (w.size() != set.feature_length()) throw ValidationError("weight length mismatch");

  std::vector<double> analytic(w.size(), 0.0);
  add_example_gradient(w, set, i, 1.0, analytic);
  for (std::size_t j = 0; j < w.size(); ++j) analytic[j] += l2 * w[j];

  std::vector<std::size_t> coords(w.size());
  std::iota(coords.begin(), coords.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(coords.begin(), coords.end(), rng);
  coords.resize(std::min(n_coords, coords.size()));

  std::vector<double> probe(w.begin(), w.end());
  auto f = [&] { return example_loss(probe, set, i) + 0.5 * l2 * dot(probe, probe); };
  GradCheckResult out;
  for (auto j : coords) {
    const double orig = probe[j];
    probe[j] = orig + h;
    const double up = f();
    probe[j] = orig - h;
    const double down = f();
    probe[j] = orig;
    const double numeric = (up - down) / (2.0 * h);
    const double err = std::abs(analytic[j] - numeric) / std::max(1.0, std::abs(analytic[j]));
    out.max_rel_error = std::max(out.max_rel_error, err);
    ++out.coords_checked;
  }
  return out;
}

}  // namespace prefboard::crm

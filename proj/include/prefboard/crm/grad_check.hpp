#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "prefboard/crm/train.hpp"

namespace prefboard::crm {

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t coords_checked = 0;
};

/// Compares the analytic gradient of example_loss(i) + (l2 / 2)|w|^2 with
/// central differences on `n_coords` random coordinates (all of them when the
/// model is smaller). Relative error is |analytic - numeric| / max(1, |analytic|).
GradCheckResult grad_check(std::span<const double> w, const TrainSet& set, std::size_t i,
                           double l2, double h = 1e-5, std::size_t n_coords = 20,
                           std::uint64_t seed = 0);

}  // namespace prefboard::crm

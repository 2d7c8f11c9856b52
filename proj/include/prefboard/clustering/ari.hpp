#pragma once

#include <span>

namespace prefboard::clustering {

/// Adjusted Rand Index from the contingency table of two labelings over the
/// same points. Returns 1 when both labelings are trivially identical (the
/// index is undefined there). Throws ValidationError on length mismatch or
/// fewer than two points.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace prefboard::clustering

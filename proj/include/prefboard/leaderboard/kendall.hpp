#pragma once

#include <map>
#include <span>
#include <string>

namespace prefboard::leaderboard {

struct KendallResult {
  double tau_b = 0.0;
  double p_value = 1.0;
  std::string p_method;  // "normal" (n >= 10) or "exact" (n < 10)
  long concordant = 0;
  long discordant = 0;
};

/// Kendall tau-b between paired observations, with a two-sided p-value from
/// the tie-adjusted normal approximation for n >= 10 and from enumerating
/// every permutation of `b` for smaller n. Throws ValidationError when the
/// lengths differ or n < 2. tau_b is 0 when either side is entirely tied.
KendallResult kendall_tau(std::span<const double> a, std::span<const double> b);

/// Rankings keyed by item; both maps must hold the same items.
KendallResult kendall_tau(const std::map<std::string, int>& rank_a,
                          const std::map<std::string, int>& rank_b);

}  // namespace prefboard::leaderboard

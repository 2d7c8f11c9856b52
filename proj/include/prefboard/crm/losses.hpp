#pragma once

#include <cmath>

namespace prefboard::crm {

inline double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// ln(1 + e^z) without overflow.
inline double softplus(double z) noexcept {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

/// Binary cross-entropy of sigma(z) against y in {0, 1}, from the logit.
inline double loss_cls_logit(double z, int y) noexcept { return softplus(z) - y * z; }

/// Binary cross-entropy of probability p against y; p is mapped back to its
/// logit so p in {0, 1} stays finite only when it agrees with y.
double loss_cls(double p, int y);

/// -ln sigma(r_chosen - r_rejected).
inline double loss_ranking(double r_chosen, double r_rejected) noexcept {
  return softplus(r_rejected - r_chosen);
}

}  // namespace prefboard::crm

#include "prefboard/crm/losses.hpp"

#include <limits>

#include "prefboard/core/error.hpp"

namespace prefboard::crm {

double loss_cls(double p, int y) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("probability outside [0, 1]");
  if (y != 0 && y != 1) throw ValidationError("label must be 0 or 1");
  const double target = y == 1 ? p : 1.0 - p;
  if (target == 1.0) return 0.0;
  if (target == 0.0) return std::numeric_limits<double>::infinity();
  return loss_cls_logit(std::log(p) - std::log1p(-p), y);
}

}  // namespace prefboard::crm

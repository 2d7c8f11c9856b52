#include "prefboard/providers/provider_config.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <thread>

#include "prefboard/core/error.hpp"

namespace prefboard::providers {

void ProviderConfig::validate() const {
  if (!(timeout_s > 0.0)) throw ValidationError("timeout_s must be positive");
  if (max_retries < 0) throw ValidationError("max_retries must be non-negative");
  if (batch_size == 0) throw ValidationError("batch_size must be positive");
  if (request_parallelism < 1) throw ValidationError("request_parallelism must be >= 1");
}

std::chrono::duration<double> RetryPolicy::delay(int retry) const {
  return std::chrono::duration<double>(backoff_base_s * std::pow(backoff_factor, retry - 1));
}

void run_with_retry(const RetryPolicy& policy, const std::string& what,
                    const std::function<void()>& attempt, int* attempts_out) {
  for (int n = 0;; ++n) {
    if (attempts_out) *attempts_out = n + 1;
    try {
      attempt();
      if (n > 0) spdlog::info("{} succeeded after {} attempts", what, n + 1);
      return;
    } catch (const TransportError& e) {
      spdlog::warn("{} attempt {} failed: {}", what, n + 1, e.what());
      if (n >= policy.max_retries) throw;
      std::this_thread::sleep_for(policy.delay(n + 1));
    }
  }
}

}  // namespace prefboard::providers

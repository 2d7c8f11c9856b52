#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <string>

namespace prefboard::providers {

struct ProviderConfig {
  std::string base_url;         // e.g. "http://localhost:8000/v1"
  std::string model_name;
  std::string api_key_env_var;  // empty: no Authorization header
  double timeout_s = 60.0;
  int max_retries = 3;
  int request_parallelism = 4;
  std::size_t batch_size = 64;
  double backoff_base_s = 0.5;
  double backoff_factor = 2.0;

  /// Throws ValidationError on timeout_s <= 0, max_retries < 0 or a zero batch size.
  void validate() const;
};

struct RetryPolicy {
  int max_retries = 3;
  double backoff_base_s = 0.5;
  double backoff_factor = 2.0;

  static RetryPolicy from(const ProviderConfig& c) {
    return {c.max_retries, c.backoff_base_s, c.backoff_factor};
  }
  /// Delay before retry number `retry` (1-based).
  std::chrono::duration<double> delay(int retry) const;
};

/// Runs `attempt` until it returns without throwing TransportError or the
/// retry budget is spent; the last error is rethrown. `attempts_out`, when
/// given, receives the number of attempts made.
void run_with_retry(const RetryPolicy& policy, const std::string& what,
                    const std::function<void()>& attempt, int* attempts_out = nullptr);

}  // namespace prefboard::providers

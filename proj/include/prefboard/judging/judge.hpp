#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefboard/core/types.hpp"
#include "prefboard/providers/chat.hpp"
#include "prefboard/providers/embedding.hpp"

namespace prefboard::judging {

enum class Preferred { a, b, tie };
std::string_view to_string(Preferred p) noexcept;
Preferred preferred_from_string(std::string_view s);

enum class SwapPolicy { none, swap_average };
std::string_view to_string(SwapPolicy p) noexcept;
SwapPolicy swap_policy_from_string(std::string_view s);

inline constexpr double kDefaultTieBand = 0.02;

/// What a judge sees: optional criteria, the conversation so far and the two
/// candidate final responses.
struct JudgeRequest {
  std::vector<std::string> criteria;  // empty: judge without criteria
  std::vector<Turn> context;
  std::string response_a;
  std::string response_b;
  // Optional provenance, used only for cache keys. Swapped along with the
  // responses.
  std::string query_id;
  std::string model_a;
  std::string model_b;

  JudgeRequest swapped() const;
};

JudgeRequest request_for(const ConditionedSample& sample, const PreferenceInstance& instance);

struct Verdict {
  Preferred preferred = Preferred::tie;
  double prob_b = 0.5;
  std::string judge_id;
  std::string criteria_hash;
};

/// A judge reports, for one presentation order, the probability that B is
/// preferred. Position handling lives in judge_pair.
class Judge {
 public:
  virtual ~Judge() = default;
  virtual std::string id() const = 0;
  virtual double prob_b(const JudgeRequest& request) = 0;
  /// Defaults to calling prob_b in order; judges override to batch or
  /// parallelize. Output order matches input order.
  virtual std::vector<double> prob_b_batch(std::span<const JudgeRequest> requests);
};

/// (p(A, B) + 1 - p(B, A)) / 2.
inline double combine_swap(double p_forward, double p_reverse) noexcept {
  return 0.5 * (p_forward + 1.0 - p_reverse);
}

/// Tie iff |prob_b - 0.5| <= tie_band.
Preferred resolve(double prob_b, double tie_band);

/// With swap_average, prob_b = (p(A, B) + 1 - p(B, A)) / 2, so judging the
/// swapped pair yields exactly the mirrored verdict.
Verdict judge_pair(Judge& judge, const JudgeRequest& request,
                   SwapPolicy policy = SwapPolicy::none, double tie_band = kDefaultTieBand);
std::vector<Verdict> judge_batch(Judge& judge, std::span<const JudgeRequest> requests,
                                 SwapPolicy policy = SwapPolicy::none,
                                 double tie_band = kDefaultTieBand);

/// Flips every verdict of the wrapped judge.
class InvertedJudge final : public Judge {
 public:
  explicit InvertedJudge(std::shared_ptr<Judge> inner) : inner_(std::move(inner)) {}
  std::string id() const override { return "inverted:" + inner_->id(); }
  double prob_b(const JudgeRequest& request) override { return 1.0 - inner_->prob_b(request); }
  std::vector<double> prob_b_batch(std::span<const JudgeRequest> requests) override;

 private:
  std::shared_ptr<Judge> inner_;
};

enum class JudgeKind { crm, llm, scripted };
std::string_view to_string(JudgeKind k) noexcept;
JudgeKind judge_kind_from_string(std::string_view s);

/// kind + config: a model file path (crm), unused (llm; the chat provider is
/// passed in) or a scripted rule name such as "length_lover" or "random:7".
struct JudgeSpec {
  JudgeKind kind = JudgeKind::scripted;
  std::string config;
  SwapPolicy swap_policy = SwapPolicy::none;
  double tie_band = kDefaultTieBand;

  void validate() const;
};

std::shared_ptr<Judge> make_judge(const JudgeSpec& spec,
                                  std::shared_ptr<providers::Embedder> embedder,
                                  std::shared_ptr<providers::ChatProvider> chat);

}  // namespace prefboard::judging

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "prefboard/core/error.hpp"
#include "prefboard/judging/judge.hpp"

namespace prefboard::judging {

inline constexpr std::string_view kJudgeTemplateVersion = "pairwise-judge-v1";
inline constexpr std::string_view kVerdictSchema = "pairwise_verdict";

/// The fixed prompt template; its hash identifies the template in results.
std::string_view judge_template();
std::string judge_template_hash();

/// Fills the template. Criteria appear as a numbered list under a
/// "Preference criteria" heading; the block is omitted when there are none.
std::string render_judge_prompt(const JudgeRequest& request);

/// Reads a verdict from "[[A]]" / "[[B]]" / "[[TIE]]" (last marker wins), a
/// "Verdict: X" line, or a bare "A", "B" or "TIE".
std::optional<Preferred> parse_verdict(std::string_view completion);

class VerdictParseError : public Error {
 public:
  VerdictParseError(const std::string& message, std::string raw)
      : Error(message), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// Chat-model judge. A maps to prob_b 0, B to 1, TIE to 0.5. Unparseable
/// answers are re-asked up to `max_reasks` times; batches run up to
/// `parallelism` requests at once.
class LlmJudge final : public Judge {
 public:
  explicit LlmJudge(std::shared_ptr<providers::ChatProvider> chat, int parallelism = 1,
                    int max_reasks = 2);

  std::string id() const override;
  double prob_b(const JudgeRequest& request) override;
  std::vector<double> prob_b_batch(std::span<const JudgeRequest> requests) override;

 private:
  std::shared_ptr<providers::ChatProvider> chat_;
  int parallelism_;
  int max_reasks_;
};

}  // namespace prefboard::judging

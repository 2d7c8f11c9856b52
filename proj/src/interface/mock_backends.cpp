#include "prefboard/interface/mock_backends.hpp"

#include <algorithm>
#include <array>

#include "prefboard/clustering/topic_tree.hpp"
#include "prefboard/core/error.hpp"
#include "prefboard/core/text.hpp"
#include "prefboard/judging/llm_judge.hpp"
#include "prefboard/leaderboard/responses.hpp"
#include "prefboard/mining/extraction.hpp"

namespace prefboard::interface {

namespace {

/// Text between `open` and the following `close` (or the end).
std::string section(const std::string& prompt, std::string_view open, std::string_view close) {
  const auto start = prompt.find(open);
  if (start == std::string::npos) return {};
  const auto body = start + open.size();
  const auto end = prompt.find(close, body);
  return prompt.substr(body, end == std::string::npos ? std::string::npos : end - body);
}

bool mentions_brevity(const std::string& criteria) {
  const auto lower = text::to_lower_ascii(criteria);
  for (const auto* w : {"concise", "brief", "short", "succinct"}) {
    if (lower.find(w) != std::string::npos) return true;
  }
  return false;
}

constexpr std::array<std::string_view, 8> kFiller{
    "It also helps to consider the surrounding context.",
    "A worked example makes the idea concrete.",
    "There are a few edge cases worth noting.",
    "Several alternatives exist with different tradeoffs.",
    "The background explains why this approach is common.",
    "Checking the result against a simple case is wise.",
    "Further reading covers the finer details.",
    "In summary the main point still holds.",
};

}  // namespace

std::string mock_extraction(const std::string& prompt) {
  const auto a = text::utf8_length(section(prompt, "[Response A]\n", "\n\n[Response B]\n"));
  const auto b = text::utf8_length(section(prompt, "[Response B]\n", "\n\nStep 1:"));
  std::string depth = "- " + std::string(kDepthCriterion) + "\n- Provide thorough explanations with examples.\n";
  std::string brevity = "- " + std::string(kBrevityCriterion) + "\n- Keep answers short and direct.\n";
  std::string structure = "- Provide a step-by-step structure.\n";
  std::string tone = "- Deliver a creative and inspiring narrative tone.\n";
  const auto& for_a = a > b ? depth : (a < b ? brevity : structure);
  const auto& for_b = a > b ? brevity : (a < b ? depth : tone);
  return "Both replies address the question.\n" + std::string(mining::kHeadingA) + ":\n" + for_a +
         std::string(mining::kHeadingB) + ":\n" + for_b;
}

std::string mock_summary(const std::string& prompt) {
  constexpr std::string_view tag = "Cluster id: ";
  const auto pos = prompt.find(tag);
  if (pos == std::string::npos) throw ValidationError("summary prompt without a cluster id");
  const auto end = prompt.find('\n', pos);
  return "topic-" + text::trim(prompt.substr(pos + tag.size(), end - pos - tag.size()));
}

std::string mock_verdict(const std::string& prompt) {
  const auto a = text::utf8_length(section(prompt, "[Assistant-A]\n", "\n\n[Assistant-B]\n"));
  const auto b = text::utf8_length(section(prompt, "[Assistant-B]\n", "\n\nDecide which reply"));
  const auto criteria_start = prompt.find("Preference criteria:");
  const auto criteria = criteria_start == std::string::npos
                            ? std::string()
                            : prompt.substr(criteria_start, prompt.find("[Conversation]") - criteria_start);
  const bool shorter_wins = mentions_brevity(criteria);
  if (a == b) return "Neither reply is better. [[TIE]]";
  const bool b_longer = b > a;
  return (b_longer != shorter_wins) ? "Verdict: [[B]]" : "Verdict: [[A]]";
}

std::shared_ptr<providers::ChatProvider> make_mock_chat() {
  return std::make_shared<providers::MockChatProvider>(
      "mock-chat", [](const std::string& prompt, const std::string& schema) -> std::string {
        if (schema == mining::kExtractionSchema) return mock_extraction(prompt);
        if (schema == clustering::kSummarySchema) return mock_summary(prompt);
        if (schema == judging::kVerdictSchema) return mock_verdict(prompt);
        if (schema == leaderboard::kResponseSchema) return "reply-from-mock";
        throw ValidationError("mock chat has no responder for schema " + schema);
      });
}

std::shared_ptr<providers::ChatProvider> make_model_chat(const std::string& model, int verbosity) {
  if (verbosity < 0) throw ValidationError("verbosity must be non-negative");
  return std::make_shared<providers::MockChatProvider>(
      "mock-model:" + model, [model, verbosity](const std::string& prompt, const std::string&) {
        std::string out = "reply-from-" + model + ".";
        const auto h = text::fnv1a64(prompt);
        for (int i = 0; i < verbosity; ++i) {
          out += ' ';
          out += kFiller[(h + static_cast<std::uint64_t>(i)) % kFiller.size()];
        }
        return out;
      });
}

}  // namespace prefboard::interface

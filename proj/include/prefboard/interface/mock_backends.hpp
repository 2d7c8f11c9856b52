#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "prefboard/providers/chat.hpp"

namespace prefboard::interface {

// Deterministic stand-ins for hosted models, keyed on the schema hint:
//   criteria_extraction  the longer response gets depth criteria, the shorter
//                        brevity criteria; equal lengths get structure vs tone
//   topic_summary        "topic-<cluster id>"
//   pairwise_verdict     length rule steered by the criteria block: shorter
//                        wins when the criteria mention brevity, else longer
//   chat_response        "reply-from-mock ..." (see make_model_chat for per-model replies)

inline constexpr std::string_view kDepthCriterion = "Prefer in-depth exploration and detailed analysis.";
inline constexpr std::string_view kBrevityCriterion =
    "Preference for concise responses that are easy to read.";

std::string mock_extraction(const std::string& prompt);
std::string mock_summary(const std::string& prompt);
std::string mock_verdict(const std::string& prompt);

/// Chat provider answering every schema above.
std::shared_ptr<providers::ChatProvider> make_mock_chat();

/// A synthetic model whose replies to any prompt are
/// "reply-from-<model>" followed by `verbosity` filler sentences chosen from
/// the prompt's hash, so longer verbosity means strictly longer replies.
std::shared_ptr<providers::ChatProvider> make_model_chat(const std::string& model, int verbosity);

}  // namespace prefboard::interface

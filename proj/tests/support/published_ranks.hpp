#pragma once

// Leaderboard tables used as fixtures. Model order is the row order of the
// criteria-conditioned ranking table; every column holds that model's rank.

#include <array>
#include <string_view>

namespace prefboard::fixtures {

inline constexpr std::array<std::string_view, 12> kModels{
    "DeepSeek-R1",      "Gemma-3-27b-it",        "Gemini-2.5-Flash",
    "Qwen3-32B",        "Gemini-2.5-Pro",        "o3-2025-04-16",
    "GPT-4.1",          "o4-mini-2025-04-16",    "Qwen3-235B-A22B",
    "QwQ-32B",          "o1-2024-12-17",         "Claude-3.7-Sonnet"};

// Ranks without criteria and under the four preset criteria.
inline constexpr std::array<double, 12> kRankNone{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
inline constexpr std::array<double, 12> kRankC1{1, 4, 6, 7, 3, 8, 11, 9, 4, 2, 9, 12};
inline constexpr std::array<double, 12> kRankC2{12, 11, 7, 6, 8, 5, 4, 2, 9, 10, 3, 1};
inline constexpr std::array<double, 12> kRankC3{3, 4, 7, 6, 1, 11, 8, 12, 2, 5, 9, 10};
inline constexpr std::array<double, 12> kRankC4{1, 6, 4, 3, 2, 5, 10, 9, 8, 7, 12, 11};

// Win rates (%) against the baseline, same model order.
inline constexpr std::array<double, 12> kWinNone{80.1, 78.7, 68.6, 66.5, 64.8, 64.6,
                                                 64.0, 56.5, 55.8, 53.3, 52.7, 46.9};
inline constexpr std::array<double, 12> kWinC1{80.3, 69.2, 65.9, 63.6, 70.1, 51.3,
                                               34.9, 37.8, 69.2, 72.6, 36.8, 33.7};
inline constexpr std::array<double, 12> kWinC2{25.5, 27.0, 37.4, 42.2, 35.4, 57.1,
                                               63.8, 69.7, 33.5, 31.4, 66.3, 70.7};
inline constexpr std::array<double, 12> kWinC3{73.4, 68.0, 64.8, 65.9, 75.7, 46.2,
                                               55.8, 43.1, 74.3, 67.2, 48.3, 46.9};
inline constexpr std::array<double, 12> kWinC4{71.5, 58.4, 62.6, 64.2, 65.3, 58.6,
                                               51.0, 51.5, 53.1, 55.4, 38.3, 42.3};

inline constexpr std::string_view kCriterion1 = "Prefer in-depth exploration and detailed analysis.";
inline constexpr std::string_view kCriterion2 =
    "Preference for concise responses that are easy to read.";
inline constexpr std::string_view kCriterion3 = "Deliver a creative and inspiring narrative tone.";
inline constexpr std::string_view kCriterion4 = "Provide a step-by-step structure.";

// Held-out agreement subset: 980 samples, 466 labelled A and 514 labelled B.
inline constexpr int kTPlusSize = 980;
inline constexpr int kTPlusLabelA = 466;

}  // namespace prefboard::fixtures

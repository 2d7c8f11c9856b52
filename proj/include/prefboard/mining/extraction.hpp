#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefboard/core/error.hpp"
#include "prefboard/core/types.hpp"
#include "prefboard/providers/chat.hpp"

namespace prefboard::mining {

inline constexpr std::string_view kExtractionSchema = "criteria_extraction";
inline constexpr std::string_view kHeadingA = "A_PREFERRED";
inline constexpr std::string_view kHeadingB = "B_PREFERRED";

/// Criteria that would explain preferring A (criteria_a) and preferring B
/// (criteria_b) for one instance.
struct ExtractionResult {
  std::string instance_id;
  CriteriaSet criteria_a;
  CriteriaSet criteria_b;

  bool operator==(const ExtractionResult&) const = default;
};

/// Raised when a completion cannot be turned into two non-empty criteria sets.
class ExtractionError : public Error {
 public:
  ExtractionError(const std::string& message, std::string raw)
      : Error(message), raw_(std::move(raw)) {}
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

std::string render_conversation(const std::vector<Turn>& turns);
std::string render_extraction_prompt(const PreferenceInstance& instance);

/// Parses the A_PREFERRED / B_PREFERRED block. Items are bullet or numbered
/// lines; duplicates are dropped case-insensitively within a side and texts
/// present verbatim on both sides are dropped from both. Throws
/// ExtractionError when a heading is missing or a side ends up empty.
ExtractionResult parse_extraction(std::string_view completion, const std::string& instance_id);

/// Prompts the provider and parses; a malformed completion is re-asked up
/// to `max_reasks` times before ExtractionError is raised.
ExtractionResult extract_criteria(const PreferenceInstance& instance,
                                  providers::ChatProvider& chat, int max_reasks = 2);

struct ExtractionFailure {
  std::string instance_id;
  std::string message;
};

struct ExtractionBatch {
  std::vector<ExtractionResult> results;  // input order, failures omitted
  std::vector<ExtractionFailure> failures;
};

/// Extracts for every instance with up to `parallelism` concurrent requests.
ExtractionBatch extract_all(std::span<const PreferenceInstance> instances,
                            providers::ChatProvider& chat, int parallelism = 1);

/// Criteria store: one line per (instance, side): {instance_id, side, criteria}.
void save_criteria_store(const std::filesystem::path& path,
                         std::span<const ExtractionResult> results);
std::vector<ExtractionResult> load_criteria_store(const std::filesystem::path& path);

}  // namespace prefboard::mining

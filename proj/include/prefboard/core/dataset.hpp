#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefboard/core/types.hpp"

namespace prefboard {

struct LineError {
  std::size_t line = 0;
  std::string message;
};

/// Outcome of reading a dataset file. Blank lines are not records; every
/// other line ends up in exactly one of instances / errors / filtered.
struct LoadResult {
  std::vector<PreferenceInstance> instances;
  std::vector<LineError> errors;
  std::size_t filtered_both_bad = 0;
  std::size_t record_lines = 0;
};

/// Parses one dataset record. Returns nullopt for "tie (both bad)".
/// Throws ValidationError on schema problems.
std::optional<PreferenceInstance> parse_preference_record(std::string_view line);

/// Reads every record, collecting malformed lines instead of throwing.
LoadResult scan_preference_dataset(const std::filesystem::path& path);

/// Strict loader: the first malformed line raises ParseError with its line number.
std::vector<PreferenceInstance> load_preference_dataset(const std::filesystem::path& path);

void save_preference_dataset(const std::filesystem::path& path,
                             std::span<const PreferenceInstance> instances);

std::string serialize_preference_record(const PreferenceInstance& instance);

/// Label fractions and averages. avg_criteria is taken over `samples` and is
/// 0 when none are given. Throws ValidationError on an empty instance list.
DatasetReport validate_dataset(std::span<const PreferenceInstance> instances,
                               std::span<const ConditionedSample> samples = {});

}  // namespace prefboard

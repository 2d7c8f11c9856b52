#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "prefboard/core/types.hpp"

namespace prefboard {

using Json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames, so readers never see a
/// partially written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Non-blank lines with their 1-based line numbers.
struct NumberedLine {
  std::size_t number;
  std::string text;
};
std::vector<NumberedLine> read_record_lines(const std::filesystem::path& path);

Json to_json(const CriteriaSet& c);
CriteriaSet criteria_from_json(const Json& j);

Json to_json(const ConditionedSample& s);
ConditionedSample sample_from_json(const Json& j);

void save_conditioned_samples(const std::filesystem::path& path,
                              const std::vector<ConditionedSample>& samples);
std::vector<ConditionedSample> load_conditioned_samples(const std::filesystem::path& path);

/// Pretty-printed JSON with a trailing newline; byte-stable for equal input.
std::string dump_stable(const Json& j);

}  // namespace prefboard

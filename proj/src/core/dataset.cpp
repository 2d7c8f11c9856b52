#include "prefboard/core/dataset.hpp"

#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"

namespace prefboard {

namespace {

constexpr std::string_view kBothBad = "tie (both bad)";

Label source_label(std::string_view s) {
  if (s == "model_a") return Label::win;
  if (s == "model_b") return Label::lose;
  if (s == "tie") return Label::tie;
  throw ValidationError("unknown label '" + std::string(s) + "'");
}

std::string_view source_label_name(Label y) {
  switch (y) {
    case Label::win: return "model_a";
    case Label::lose: return "model_b";
    case Label::tie: return "tie";
  }
  return "tie";
}

const Json& require(const Json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string require_string(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_string()) throw ValidationError(std::string("field '") + key + "' is not a string");
  return v.get<std::string>();
}

}  // namespace

std::optional<PreferenceInstance> parse_preference_record(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("record is not an object");

  const std::string label_text = require_string(j, "label");
  if (label_text == kBothBad) return std::nullopt;
  const Label label = source_label(label_text);

  const Json& turns_json = require(j, "turns");
  if (!turns_json.is_array()) throw ValidationError("field 'turns' is not an array");
  std::vector<Turn> turns;
  for (const auto& t : turns_json) {
    if (!t.is_object()) throw ValidationError("turn is not an object");
    turns.push_back({require_string(t, "role"), require_string(t, "text")});
  }

  std::optional<std::string> model_a;
  std::optional<std::string> model_b;
  if (j.contains("model_a") && !j.at("model_a").is_null()) model_a = require_string(j, "model_a");
  if (j.contains("model_b") && !j.at("model_b").is_null()) model_b = require_string(j, "model_b");

  PreferenceInstance inst =
      make_instance(std::move(turns), require_string(j, "response_a"),
                    require_string(j, "response_b"), label, std::move(model_a), std::move(model_b));
  if (j.contains("id") && !j.at("id").is_null()) {
    const std::string given = require_string(j, "id");
    if (given != inst.id) throw ValidationError("id does not match content hash");
  }
  return inst;
}

LoadResult scan_preference_dataset(const std::filesystem::path& path) {
  LoadResult result;
  for (const auto& line : read_record_lines(path)) {
    ++result.record_lines;
    try {
      auto inst = parse_preference_record(line.text);
      if (inst) {
        result.instances.push_back(std::move(*inst));
      } else {
        ++result.filtered_both_bad;
      }
    } catch (const ValidationError& e) {
      result.errors.push_back({line.number, e.what()});
    }
  }
  return result;
}

std::vector<PreferenceInstance> load_preference_dataset(const std::filesystem::path& path) {
  std::vector<PreferenceInstance> instances;
  for (const auto& line : read_record_lines(path)) {
    try {
      auto inst = parse_preference_record(line.text);
      if (inst) instances.push_back(std::move(*inst));
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line.number);
    }
  }
  return instances;
}

std::string serialize_preference_record(const PreferenceInstance& instance) {
  Json j;
  j["id"] = instance.id;
  Json turns = Json::array();
  for (const auto& t : instance.turns) turns.push_back({{"role", t.role}, {"text", t.text}});
  j["turns"] = std::move(turns);
  j["response_a"] = instance.response_a;
  j["response_b"] = instance.response_b;
  j["label"] = std::string(source_label_name(instance.label));
  if (instance.model_a) j["model_a"] = *instance.model_a;
  if (instance.model_b) j["model_b"] = *instance.model_b;
  return j.dump();
}

void save_preference_dataset(const std::filesystem::path& path,
                             std::span<const PreferenceInstance> instances) {
  std::string out;
  for (const auto& inst : instances) {
    out += serialize_preference_record(inst);
    out += '\n';
  }
  write_file_atomic(path, out);
}

DatasetReport validate_dataset(std::span<const PreferenceInstance> instances,
                               std::span<const ConditionedSample> samples) {
  if (instances.empty()) throw ValidationError("dataset is empty");
  std::size_t wins = 0, ties = 0, loses = 0, turns = 0;
  for (const auto& inst : instances) {
    validate_instance(inst);
    switch (inst.label) {
      case Label::win: ++wins; break;
      case Label::tie: ++ties; break;
      case Label::lose: ++loses; break;
    }
    turns += inst.turns.size();
  }
  const double n = static_cast<double>(instances.size());
  DatasetReport report;
  report.n_total = instances.size();
  report.win_pct = 100.0 * static_cast<double>(wins) / n;
  report.tie_pct = 100.0 * static_cast<double>(ties) / n;
  report.lose_pct = 100.0 * static_cast<double>(loses) / n;
  report.avg_turns = static_cast<double>(turns) / n;
  if (!samples.empty()) {
    std::size_t criteria = 0;
    for (const auto& s : samples) criteria += s.criteria.items.size();
    report.avg_criteria = static_cast<double>(criteria) / static_cast<double>(samples.size());
  }
  return report;
}

}  // namespace prefboard

#include "prefboard/mining/extraction.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "prefboard/core/io.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::mining {

std::string render_conversation(const std::vector<Turn>& turns) {
  std::string out;
  for (const auto& t : turns) {
    std::string role = t.role;
    if (!role.empty()) role[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(role[0])));
    out += role + ": " + t.text + "\n";
  }
  return out;
}

std::string render_extraction_prompt(const PreferenceInstance& instance) {
  std::string p;
  p += "Two assistant responses to the same conversation are shown below.\n\n";
  p += "[Conversation]\n" + render_conversation(instance.turns) + "\n";
  p += "[Response A]\n" + instance.response_a + "\n\n";
  p += "[Response B]\n" + instance.response_b + "\n\n";
  p +=
      "Step 1: assess the strong and weak points of each response as neutrally as you can.\n"
      "Step 2: list the preference criteria that a user who liked Response A better would\n"
      "plausibly hold, then the criteria of a user who liked Response B better.\n"
      "Write every criterion as a general statement about responses; do not mention names,\n"
      "facts or wording from this particular conversation. Give 2 to 6 criteria per side.\n\n"
      "Finish with exactly this block:\n";
  p += std::string(kHeadingA) + ":\n- <criterion>\n";
  p += std::string(kHeadingB) + ":\n- <criterion>\n";
  return p;
}

namespace {

/// Heading name when the line is a heading, stripped of markdown decoration.
std::optional<std::string_view> heading_of(std::string_view line) {
  std::string cleaned;
  for (char c : line) {
    if (c == '#' || c == '*' || (c == '_' && cleaned.empty())) continue;
    cleaned.push_back(c);
  }
  cleaned = text::trim(cleaned);
  while (!cleaned.empty() && (cleaned.back() == ':' || cleaned.back() == '*')) cleaned.pop_back();
  cleaned = text::trim(cleaned);
  if (cleaned == kHeadingA) return kHeadingA;
  if (cleaned == kHeadingB) return kHeadingB;
  return std::nullopt;
}

std::optional<std::string> bullet_item(std::string_view raw) {
  std::string line = text::trim(raw);
  if (line.empty()) return std::nullopt;
  std::size_t i = 0;
  if (line[0] == '-' || line[0] == '*' || line[0] == '+') {
    i = 1;
  } else if (line.rfind("\xE2\x80\xA2", 0) == 0) {  // bullet U+2022
    i = 3;
  } else if (std::isdigit(static_cast<unsigned char>(line[0]))) {
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || (line[i] != '.' && line[i] != ')')) return std::nullopt;
    ++i;
  } else {
    return std::nullopt;
  }
  std::string item = text::trim(std::string_view(line).substr(i));
  if (item.empty()) return std::nullopt;
  return item;
}

std::vector<std::string> dedupe_ci(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (seen.insert(text::to_lower_ascii(item)).second) out.push_back(item);
  }
  return out;
}

}  // namespace

ExtractionResult parse_extraction(std::string_view completion, const std::string& instance_id) {
  std::map<std::string_view, std::vector<std::string>> sections;
  std::optional<std::string_view> current;
  std::size_t start = 0;
  const std::string normalized = text::normalize_newlines(completion);
  std::string_view rest(normalized);
  while (start <= rest.size()) {
    const auto end = rest.find('\n', start);
    const auto line = rest.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                                       : end - start);
    if (auto h = heading_of(line)) {
      current = *h;
      sections[*h].clear();  // the last block wins when the model repeats it
    } else if (current) {
      if (auto item = bullet_item(line)) sections[*current].push_back(std::move(*item));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  if (!sections.contains(kHeadingA) || !sections.contains(kHeadingB)) {
    throw ExtractionError("completion lacks the " + std::string(kHeadingA) + "/" +
                              std::string(kHeadingB) + " headings",
                          std::string(completion));
  }
  auto a = dedupe_ci(sections[kHeadingA]);
  auto b = dedupe_ci(sections[kHeadingB]);
  const std::set<std::string> in_a(a.begin(), a.end());
  const std::set<std::string> in_b(b.begin(), b.end());
  std::erase_if(a, [&](const std::string& s) { return in_b.contains(s); });
  std::erase_if(b, [&](const std::string& s) { return in_a.contains(s); });
  if (a.empty() || b.empty()) {
    throw ExtractionError("a criteria side is empty", std::string(completion));
  }
  ExtractionResult r;
  r.instance_id = instance_id;
  r.criteria_a = CriteriaSet{std::move(a), Side::a_preferred, {}};
  r.criteria_b = CriteriaSet{std::move(b), Side::b_preferred, {}};
  r.criteria_a.validate();
  r.criteria_b.validate();
  return r;
}

ExtractionResult extract_criteria(const PreferenceInstance& instance,
                                  providers::ChatProvider& chat, int max_reasks) {
  std::string prompt = render_extraction_prompt(instance);
  std::string last_raw;
  std::string last_error;
  for (int attempt = 0; attempt <= max_reasks; ++attempt) {
    last_raw = providers::chat_complete(chat, prompt, std::string(kExtractionSchema));
    try {
      return parse_extraction(last_raw, instance.id);
    } catch (const ExtractionError& e) {
      last_error = e.what();
      spdlog::debug("extraction for {} unparseable (attempt {}): {}", instance.id, attempt + 1,
                    last_error);
    }
  }
  throw ExtractionError("criteria extraction failed for " + instance.id + " after " +
                            std::to_string(max_reasks) + " re-asks: " + last_error,
                        last_raw);
}

ExtractionBatch extract_all(std::span<const PreferenceInstance> instances,
                            providers::ChatProvider& chat, int parallelism) {
  std::vector<std::optional<ExtractionResult>> slots(instances.size());
  std::vector<std::string> errors(instances.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < instances.size(); i = next++) {
      try {
        slots[i] = extract_criteria(instances[i], chat);
      } catch (const Error& e) {
        errors[i] = e.what();
      }
    }
  };
  const auto workers = static_cast<std::size_t>(std::max(1, parallelism));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, instances.size()); ++w) pool.emplace_back(worker);
  }
  ExtractionBatch batch;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (slots[i]) {
      batch.results.push_back(std::move(*slots[i]));
    } else {
      batch.failures.push_back({instances[i].id, errors[i]});
    }
  }
  return batch;
}

void save_criteria_store(const std::filesystem::path& path,
                         std::span<const ExtractionResult> results) {
  std::string out;
  for (const auto& r : results) {
    for (const CriteriaSet* c : {&r.criteria_a, &r.criteria_b}) {
      Json j;
      j["instance_id"] = r.instance_id;
      j["side"] = std::string(to_string(c->side));
      j["criteria"] = c->items;
      out += j.dump() + "\n";
    }
  }
  write_file_atomic(path, out);
}

std::vector<ExtractionResult> load_criteria_store(const std::filesystem::path& path) {
  std::map<std::string, ExtractionResult> by_id;
  std::vector<std::string> order;
  for (const auto& line : read_record_lines(path)) {
    try {
      const Json j = Json::parse(line.text);
      const auto id = j.at("instance_id").get<std::string>();
      CriteriaSet c{j.at("criteria").get<std::vector<std::string>>(),
                    side_from_string(j.at("side").get<std::string>()),
                    {}};
      c.validate();
      auto [it, inserted] = by_id.try_emplace(id);
      if (inserted) {
        order.push_back(id);
        it->second.instance_id = id;
      }
      (c.side == Side::a_preferred ? it->second.criteria_a : it->second.criteria_b) = std::move(c);
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line.number);
    }
  }
  std::vector<ExtractionResult> out;
  for (const auto& id : order) {
    auto& r = by_id.at(id);
    if (r.criteria_a.items.empty() || r.criteria_b.items.empty()) {
      throw ValidationError("criteria store lacks a side for " + id);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace prefboard::mining

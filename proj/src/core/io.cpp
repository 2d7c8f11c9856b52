#include "prefboard/core/io.hpp"

#include <fstream>
#include <sstream>

#include "prefboard/core/error.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<NumberedLine> read_record_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<NumberedLine> lines;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    lines.push_back({number, std::move(line)});
  }
  return lines;
}

Json to_json(const CriteriaSet& c) {
  Json j;
  j["items"] = c.items;
  j["side"] = std::string(to_string(c.side));
  if (!c.cluster_ids.empty()) j["cluster_ids"] = c.cluster_ids;
  return j;
}

CriteriaSet criteria_from_json(const Json& j) {
  CriteriaSet c;
  c.items = j.at("items").get<std::vector<std::string>>();
  c.side = side_from_string(j.at("side").get<std::string>());
  if (j.contains("cluster_ids")) c.cluster_ids = j.at("cluster_ids").get<std::vector<int>>();
  return c;
}

Json to_json(const ConditionedSample& s) {
  Json j;
  j["instance_id"] = s.instance_id;
  j["instance_label"] = std::string(to_string(s.instance_label));
  j["criteria"] = to_json(s.criteria);
  j["y_c"] = s.y_c;
  j["subset_tag"] = std::string(to_string(s.subset_tag));
  j["origin"] = {{"op", std::string(to_string(s.origin.op))},
                 {"seed", s.origin.seed},
                 {"not_noisable", s.origin.not_noisable}};
  return j;
}

ConditionedSample sample_from_json(const Json& j) {
  ConditionedSample s;
  s.instance_id = j.at("instance_id").get<std::string>();
  s.instance_label = label_from_string(j.at("instance_label").get<std::string>());
  s.criteria = criteria_from_json(j.at("criteria"));
  s.y_c = j.at("y_c").get<int>();
  s.subset_tag = subset_tag_from_string(j.at("subset_tag").get<std::string>());
  if (j.contains("origin")) {
    const auto& o = j.at("origin");
    s.origin.op = noise_op_from_string(o.value("op", std::string("none")));
    s.origin.seed = o.value("seed", std::uint64_t{0});
    s.origin.not_noisable = o.value("not_noisable", false);
  }
  s.validate();
  return s;
}

void save_conditioned_samples(const std::filesystem::path& path,
                              const std::vector<ConditionedSample>& samples) {
  std::string out;
  for (const auto& s : samples) {
    out += to_json(s).dump();
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<ConditionedSample> load_conditioned_samples(const std::filesystem::path& path) {
  std::vector<ConditionedSample> samples;
  for (const auto& line : read_record_lines(path)) {
    try {
      samples.push_back(sample_from_json(Json::parse(line.text)));
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line.number);
    }
  }
  return samples;
}

std::string dump_stable(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace prefboard

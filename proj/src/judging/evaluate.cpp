#include "prefboard/judging/evaluate.hpp"

#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"

namespace prefboard::judging {

AccuracyReport evaluate_accuracy(Judge& judge, std::span<const ConditionedSample> subset,
                                 const InstanceIndex& instances, SwapPolicy policy,
                                 double tie_band) {
  if (subset.empty()) throw ValidationError("cannot evaluate accuracy on an empty subset");
  std::vector<JudgeRequest> requests;
  requests.reserve(subset.size());
  for (const auto& s : subset) {
    s.validate();
    requests.push_back(request_for(s, instances.at(s.instance_id)));
  }
  const auto verdicts = judge_batch(judge, requests, policy, tie_band);

  AccuracyReport report;
  report.total = subset.size();
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const auto& v = verdicts[i];
    JudgmentRecord r;
    r.sample_id = subset[i].sample_id();
    r.judge_id = v.judge_id;
    r.criteria_hash = v.criteria_hash;
    r.prob_b = v.prob_b;
    r.preferred = v.preferred;
    r.order_used = policy == SwapPolicy::none ? "original" : "swap_average";
    r.y_c = subset[i].y_c;
    r.correct = (v.preferred == Preferred::b && r.y_c == 1) ||
                (v.preferred == Preferred::a && r.y_c == 0);
    report.correct += r.correct ? 1 : 0;
    report.ties += v.preferred == Preferred::tie ? 1 : 0;
    report.records.push_back(std::move(r));
  }
  report.accuracy_pct =
      100.0 * static_cast<double>(report.correct) / static_cast<double>(report.total);
  return report;
}

void save_judgment_records(const std::filesystem::path& path,
                           std::span<const JudgmentRecord> records) {
  std::string out;
  for (const auto& r : records) {
    const Json j{{"sample_id", r.sample_id},     {"judge_id", r.judge_id},
                 {"criteria_hash", r.criteria_hash}, {"prob_b", r.prob_b},
                 {"preferred", std::string(to_string(r.preferred))},
                 {"order_used", r.order_used}, {"y_c", r.y_c}, {"correct", r.correct}};
    out += j.dump() + "\n";
  }
  write_file_atomic(path, out);
}

std::vector<JudgmentRecord> load_judgment_records(const std::filesystem::path& path) {
  std::vector<JudgmentRecord> out;
  for (const auto& line : read_record_lines(path)) {
    try {
      const Json j = Json::parse(line.text);
      JudgmentRecord r;
      r.sample_id = j.at("sample_id").get<std::string>();
      r.judge_id = j.at("judge_id").get<std::string>();
      r.criteria_hash = j.at("criteria_hash").get<std::string>();
      r.prob_b = j.at("prob_b").get<double>();
      r.preferred = preferred_from_string(j.at("preferred").get<std::string>());
      r.order_used = j.at("order_used").get<std::string>();
      r.y_c = j.at("y_c").get<int>();
      r.correct = j.at("correct").get<bool>();
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw ParseError(e.what(), line.number);
    }
  }
  return out;
}

}  // namespace prefboard::judging

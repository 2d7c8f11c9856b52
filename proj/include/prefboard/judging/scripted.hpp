#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "prefboard/judging/judge.hpp"

namespace prefboard::judging {

enum class ScriptKind { length_lover, brevity_lover, keyword_matcher, random };

/// Rule-based judge used as a test oracle. Answers are hard (prob_b in
/// {0, 0.5, 1}):
///  - length_lover: the longer response in code points, tie when equal
///  - brevity_lover: the shorter one
///  - keyword_matcher: the response with more word occurrences drawn from the
///    criteria's vocabulary, tie when equal
///  - random: a coin seeded by (seed, request content), so repeated calls agree
class ScriptedJudge final : public Judge {
 public:
  explicit ScriptedJudge(ScriptKind kind, std::uint64_t seed = 0) : kind_(kind), seed_(seed) {}

  std::string id() const override;
  double prob_b(const JudgeRequest& request) override;

 private:
  ScriptKind kind_;
  std::uint64_t seed_;
};

/// "length_lover", "brevity_lover", "keyword_matcher", "random" or "random:<seed>".
std::shared_ptr<Judge> make_scripted(const std::string& name);

}  // namespace prefboard::judging

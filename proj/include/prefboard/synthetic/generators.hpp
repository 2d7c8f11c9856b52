#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "prefboard/core/types.hpp"

namespace prefboard::synthetic {

/// Planted topics of the synthetic corpus, in topic-index order.
const std::vector<std::string>& topic_names();

struct TopicCorpus {
  std::vector<PreferenceInstance> instances;
  std::map<std::string, int> topic_of;  // instance id -> planted topic index
};

/// `per_topic` single-turn instances for each of the six topics. Queries mix
/// topic words with shared filler; one response is verbose, the other terse,
/// in random order. Humans prefer the verbose one about 70% of the time and
/// about 5% of instances are ties.
TopicCorpus topic_corpus(std::size_t per_topic = 40, std::uint64_t seed = 0);

enum class Family { verbosity, keyword };

struct PlantedSuite {
  InstanceIndex instances;
  /// Two samples per instance (A side then B side), instance order.
  std::vector<ConditionedSample> samples;
  std::map<std::string, Family> family_of;  // instance id -> family
};

/// `n_samples / 2` instances split between two criteria families:
///   verbosity  one long and one short response; the long side gets depth
///              criteria, the short side brevity criteria
///   keyword    similar lengths; each response uses its own keyword and its
///              criteria ask for that keyword
/// Human labels favor the longer response (verbosity) or the A response
/// (keyword) 75% of the time, so a judge ignoring criteria splits plus and
/// minus accuracy apart.
PlantedSuite planted_suite(std::size_t n_samples = 2000, std::uint64_t seed = 0);

/// "model-1" .. "model-n".
std::vector<std::string> graded_model_names(std::size_t n);

}  // namespace prefboard::synthetic

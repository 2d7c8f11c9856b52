#include "prefboard/judging/scripted.hpp"

#include <set>

#include "prefboard/core/error.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::judging {

namespace {

double compare(std::size_t a, std::size_t b) {
  if (a == b) return 0.5;
  return b > a ? 1.0 : 0.0;
}

std::size_t keyword_hits(const std::string& response, const std::set<std::string>& vocab) {
  std::size_t hits = 0;
  for (const auto& tok : text::tokenize_words(response)) hits += vocab.contains(tok) ? 1 : 0;
  return hits;
}

}  // namespace

std::string ScriptedJudge::id() const {
  switch (kind_) {
    case ScriptKind::length_lover: return "scripted:length_lover";
    case ScriptKind::brevity_lover: return "scripted:brevity_lover";
    case ScriptKind::keyword_matcher: return "scripted:keyword_matcher";
    case ScriptKind::random: return "scripted:random:" + std::to_string(seed_);
  }
  return "scripted";
}

double ScriptedJudge::prob_b(const JudgeRequest& r) {
  switch (kind_) {
    case ScriptKind::length_lover:
      return compare(text::utf8_length(r.response_a), text::utf8_length(r.response_b));
    case ScriptKind::brevity_lover:
      return compare(text::utf8_length(r.response_b), text::utf8_length(r.response_a));
    case ScriptKind::keyword_matcher: {
      std::set<std::string> vocab;
      for (const auto& c : r.criteria) {
        for (auto& t : text::tokenize_words(c)) vocab.insert(std::move(t));
      }
      return compare(keyword_hits(r.response_a, vocab), keyword_hits(r.response_b, vocab));
    }
    case ScriptKind::random: {
      std::string key = std::to_string(seed_) + "\x1f" + text::join(r.criteria, "\x1e");
      for (const auto& t : r.context) key += "\x1f" + t.role + "\x1e" + t.text;
      key += "\x1f" + r.response_a + "\x1f" + r.response_b;
      // fold the high bits in; FNV's lowest bit alone is a poor coin
      const auto h = text::fnv1a64(key);
      return ((h ^ (h >> 33)) & 1U) != 0 ? 1.0 : 0.0;
    }
  }
  return 0.5;
}

std::shared_ptr<Judge> make_scripted(const std::string& name) {
  if (name == "length_lover") return std::make_shared<ScriptedJudge>(ScriptKind::length_lover);
  if (name == "brevity_lover") return std::make_shared<ScriptedJudge>(ScriptKind::brevity_lover);
  if (name == "keyword_matcher") {
    return std::make_shared<ScriptedJudge>(ScriptKind::keyword_matcher);
  }
  if (name == "random") return std::make_shared<ScriptedJudge>(ScriptKind::random, 0);
  if (name.rfind("random:", 0) == 0) {
    try {
      return std::make_shared<ScriptedJudge>(ScriptKind::random, std::stoull(name.substr(7)));
    } catch (const std::exception&) {
      throw ValidationError("bad random judge seed in '" + name + "'");
    }
  }
  throw ValidationError("unknown scripted judge '" + name + "'");
}

}  // namespace prefboard::judging

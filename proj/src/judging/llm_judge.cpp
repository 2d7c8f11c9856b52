#include "prefboard/judging/llm_judge.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <thread>

#include "prefboard/core/hash.hpp"
#include "prefboard/core/text.hpp"
#include "prefboard/mining/extraction.hpp"

namespace prefboard::judging {

namespace {

constexpr std::string_view kTemplate =
    "You are comparing two assistant replies to the same conversation.\n"
    "{criteria_block}"
    "[Conversation]\n"
    "{conversation}\n"
    "[Assistant-A]\n"
    "{response_a}\n\n"
    "[Assistant-B]\n"
    "{response_b}\n\n"
    "{instruction}\n"
    "End your answer with exactly one of [[A]], [[B]] or [[TIE]].\n";

constexpr std::string_view kWithCriteria =
    "Decide which reply better satisfies the preference criteria above. Judge by those "
    "criteria only, not by your own taste, and ignore the order in which the replies appear.";

constexpr std::string_view kWithoutCriteria =
    "Decide which reply a typical user would prefer. Ignore the order in which the replies "
    "appear and do not favor a reply for its length alone.";

/// Single left-to-right pass, so placeholder-like text inside values stays literal.
std::string fill(std::string_view tmpl, const std::map<std::string_view, std::string>& values) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        const auto it = values.find(tmpl.substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

std::optional<Preferred> token_verdict(std::string token) {
  token = text::trim(token);
  while (!token.empty() && (token.back() == '.' || token.back() == '*')) token.pop_back();
  while (!token.empty() && token.front() == '*') token.erase(token.begin());
  for (char& c : token) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (token == "A") return Preferred::a;
  if (token == "B") return Preferred::b;
  if (token == "TIE") return Preferred::tie;
  return std::nullopt;
}

}  // namespace

std::string_view judge_template() { return kTemplate; }

std::string judge_template_hash() {
  return sha256_hex(std::string(kTemplate) + std::string(kWithCriteria) +
                    std::string(kWithoutCriteria));
}

std::string render_judge_prompt(const JudgeRequest& request) {
  std::string block;
  if (!request.criteria.empty()) {
    block = "\nPreference criteria:\n";
    for (std::size_t i = 0; i < request.criteria.size(); ++i) {
      block += std::to_string(i + 1) + ". " + request.criteria[i] + "\n";
    }
    block += "\n";
  }
  return fill(kTemplate,
              {{"criteria_block", block},
               {"conversation", mining::render_conversation(request.context)},
               {"response_a", request.response_a},
               {"response_b", request.response_b},
               {"instruction",
                std::string(request.criteria.empty() ? kWithoutCriteria : kWithCriteria)}});
}

std::optional<Preferred> parse_verdict(std::string_view completion) {
  const std::string s = text::normalize_newlines(completion);
  std::optional<Preferred> marker;
  std::size_t best = 0;
  for (const auto& [tag, p] : {std::pair{"[[A]]", Preferred::a}, std::pair{"[[B]]", Preferred::b},
                               std::pair{"[[TIE]]", Preferred::tie}}) {
    const auto pos = s.rfind(tag);
    if (pos != std::string::npos && (!marker || pos > best)) {
      marker = p;
      best = pos;
    }
  }
  if (marker) return marker;

  std::optional<Preferred> found;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = s.find('\n', start);
    std::string line = text::trim(std::string_view(s).substr(
        start, end == std::string::npos ? std::string::npos : end - start));
    const std::string lower = text::to_lower_ascii(line);
    if (lower.rfind("verdict:", 0) == 0) line = line.substr(8);
    if (auto v = token_verdict(line)) found = v;
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return found;
}

LlmJudge::LlmJudge(std::shared_ptr<providers::ChatProvider> chat, int parallelism,
                   int max_reasks)
    : chat_(std::move(chat)), parallelism_(std::max(1, parallelism)), max_reasks_(max_reasks) {}

std::string LlmJudge::id() const {
  return "llm:" + chat_->id() + ":" + std::string(kJudgeTemplateVersion);
}

double LlmJudge::prob_b(const JudgeRequest& request) {
  const auto prompt = render_judge_prompt(request);
  std::string raw;
  for (int attempt = 0; attempt <= max_reasks_; ++attempt) {
    raw = providers::chat_complete(*chat_, prompt, std::string(kVerdictSchema));
    if (const auto v = parse_verdict(raw)) {
      return *v == Preferred::a ? 0.0 : (*v == Preferred::b ? 1.0 : 0.5);
    }
  }
  throw VerdictParseError("no verdict in judge output after " + std::to_string(max_reasks_) +
                              " re-asks",
                          raw);
}

std::vector<double> LlmJudge::prob_b_batch(std::span<const JudgeRequest> requests) {
  std::vector<double> out(requests.size(), 0.5);
  if (parallelism_ == 1 || requests.size() < 2) {
    for (std::size_t i = 0; i < requests.size(); ++i) out[i] = prob_b(requests[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(requests.size());
  {
    std::vector<std::jthread> pool;
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(parallelism_), requests.size());
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < requests.size(); i = next++) {
          try {
            out[i] = prob_b(requests[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace prefboard::judging

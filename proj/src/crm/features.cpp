#include "prefboard/crm/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "prefboard/core/error.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::crm {

std::string context_text(const PreferenceInstance& instance) {
  std::vector<std::string> parts;
  for (const auto& t : instance.turns) parts.push_back(t.text);
  return text::join(parts, "\n");
}

PairInput pair_input(const CriteriaSet& criteria, const PreferenceInstance& instance) {
  return {criteria.joined(), context_text(instance), instance.response_a, instance.response_b};
}

PairInput pair_input(const ConditionedSample& sample, const InstanceIndex& instances) {
  return pair_input(sample.criteria, instances.at(sample.instance_id));
}

namespace {

double char_length(const std::string& s) {
  const auto n = text::utf8_length(s);
  if (n == 0) throw ValidationError("response is empty");
  return static_cast<double>(n);
}

}  // namespace

double length_log_ratio(const std::string& a, const std::string& b) {
  const double l = std::log(char_length(a) / char_length(b));
  return std::clamp(l, -kLengthClip, kLengthClip);
}

std::size_t pair_feature_length(std::size_t dim) noexcept { return 4 * dim + 1; }
std::size_t point_feature_length(std::size_t dim) noexcept { return 3 * dim + 1; }

void pair_features_from(std::span<const double> ec, std::span<const double> eq,
                        std::span<const double> ea, std::span<const double> eb,
                        double length_ratio, std::span<double> out) {
  const std::size_t d = ec.size();
  for (std::size_t i = 0; i < d; ++i) {
    const double diff = ea[i] - eb[i];
    out[i] = ec[i] * diff;
    out[d + i] = eq[i] * diff;
    out[2 * d + i] = diff;
    out[3 * d + 1 + i] = ec[i] * length_ratio;
  }
  out[3 * d] = length_ratio;
}

void point_features_from(std::span<const double> ec, std::span<const double> eq,
                         std::span<const double> eo, double log_length, std::span<double> out) {
  const std::size_t d = ec.size();
  for (std::size_t i = 0; i < d; ++i) {
    out[i] = ec[i] * eo[i];
    out[d + i] = eq[i] * eo[i];
    out[2 * d + i] = eo[i];
  }
  out[3 * d] = log_length;
}

void Featurizer::prefetch(std::span<const PairInput> inputs) {
  std::set<std::string> missing;
  for (const auto& in : inputs) {
    for (const std::string* t : {&in.criteria, &in.query, &in.response_a, &in.response_b}) {
      if (!cache_.contains(*t)) missing.insert(*t);
    }
  }
  if (missing.empty()) return;
  const std::vector<std::string> texts(missing.begin(), missing.end());
  auto vecs = providers::embed_texts(texts, embedder_);
  for (std::size_t i = 0; i < texts.size(); ++i) cache_.emplace(texts[i], std::move(vecs[i].values));
}

const std::vector<double>& Featurizer::vec(const std::string& text) {
  auto it = cache_.find(text);
  if (it == cache_.end()) {
    const std::string one[] = {text};
    auto v = providers::embed_texts(one, embedder_);
    it = cache_.emplace(text, std::move(v.front().values)).first;
  }
  return it->second;
}

std::vector<double> Featurizer::pair(const PairInput& in) {
  std::vector<double> out(pair_feature_length(dim()));
  const double l = length_log_ratio(in.response_a, in.response_b);
  pair_features_from(vec(in.criteria), vec(in.query), vec(in.response_a), vec(in.response_b), l,
                     out);
  return out;
}

std::vector<double> Featurizer::point(const std::string& criteria, const std::string& query,
                                      const std::string& response) {
  std::vector<double> out(point_feature_length(dim()));
  point_features_from(vec(criteria), vec(query), vec(response), std::log(char_length(response)),
                      out);
  return out;
}

DenseMatrix Featurizer::pair_batch(std::span<const PairInput> inputs) {
  prefetch(inputs);
  DenseMatrix out(inputs.size(), pair_feature_length(dim()));
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    pair_features_from(vec(in.criteria), vec(in.query), vec(in.response_a), vec(in.response_b),
                       length_log_ratio(in.response_a, in.response_b), out.row(i));
  }
  return out;
}

DenseMatrix Featurizer::point_batch(std::span<const PairInput> inputs, bool side_b) {
  prefetch(inputs);
  DenseMatrix out(inputs.size(), point_feature_length(dim()));
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& in = inputs[i];
    const auto& resp = side_b ? in.response_b : in.response_a;
    point_features_from(vec(in.criteria), vec(in.query), vec(resp), std::log(char_length(resp)),
                        out.row(i));
  }
  return out;
}

std::vector<double> featurize_pair(const std::string& criteria, const std::string& query,
                                   const std::string& resp_a, const std::string& resp_b,
                                   providers::Embedder& embedder) {
  Featurizer f(embedder);
  return f.pair({criteria, query, resp_a, resp_b});
}

}  // namespace prefboard::crm

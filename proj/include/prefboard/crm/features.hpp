#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "prefboard/core/matrix.hpp"
#include "prefboard/core/types.hpp"
#include "prefboard/providers/embedding.hpp"

namespace prefboard::crm {

inline constexpr double kLengthClip = 5.0;

/// The four texts a conditioned comparison is made of.
struct PairInput {
  std::string criteria;  // items joined by "; "
  std::string query;
  std::string response_a;
  std::string response_b;
};

/// Context text used for e_q: all turns, newline separated.
std::string context_text(const PreferenceInstance& instance);

PairInput pair_input(const ConditionedSample& sample, const InstanceIndex& instances);
PairInput pair_input(const CriteriaSet& criteria, const PreferenceInstance& instance);

/// ln(charlen(a) / charlen(b)) in code points, clipped to +-kLengthClip.
double length_log_ratio(const std::string& a, const std::string& b);

/// Pairwise features, length 4d + 1, with D = e_A - e_B and l the length
/// log-ratio: [e_c * D; e_q * D; D; l; e_c * l]. Every block is odd under
/// swapping A and B.
std::size_t pair_feature_length(std::size_t dim) noexcept;
/// Pointwise features, length 3d + 1: [e_c * e_o; e_q * e_o; e_o; ln charlen(o)].
std::size_t point_feature_length(std::size_t dim) noexcept;

void pair_features_from(std::span<const double> ec, std::span<const double> eq,
                        std::span<const double> ea, std::span<const double> eb,
                        double length_ratio, std::span<double> out);
void point_features_from(std::span<const double> ec, std::span<const double> eq,
                         std::span<const double> eo, double log_length, std::span<double> out);

/// Embeds texts once per distinct string and assembles feature rows.
class Featurizer {
 public:
  explicit Featurizer(providers::Embedder& embedder) : embedder_(embedder) {}

  std::size_t dim() const { return embedder_.dim(); }
  std::string embedder_id() const { return embedder_.id(); }

  std::vector<double> pair(const PairInput& in);
  /// Features of (criteria, query, response) for one response.
  std::vector<double> point(const std::string& criteria, const std::string& query,
                            const std::string& response);

  DenseMatrix pair_batch(std::span<const PairInput> inputs);
  /// Row i holds the pointwise features of inputs[i].response_a, or of
  /// response_b when `side_b`.
  DenseMatrix point_batch(std::span<const PairInput> inputs, bool side_b);

 private:
  void prefetch(std::span<const PairInput> inputs);
  const std::vector<double>& vec(const std::string& text);

  providers::Embedder& embedder_;
  std::unordered_map<std::string, std::vector<double>> cache_;
};

/// One-shot pairwise featurization. Throws ValidationError on an empty response.
std::vector<double> featurize_pair(const std::string& criteria, const std::string& query,
                                   const std::string& resp_a, const std::string& resp_b,
                                   providers::Embedder& embedder);

}  // namespace prefboard::crm

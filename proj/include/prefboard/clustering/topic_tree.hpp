#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefboard/clustering/hdbscan.hpp"
#include "prefboard/core/matrix.hpp"
#include "prefboard/kernels/kernels.hpp"
#include "prefboard/providers/chat.hpp"
#include "prefboard/providers/embedding.hpp"

namespace prefboard::clustering {

inline constexpr std::string_view kSummarySchema = "topic_summary";

enum class TopicLevel { leaf, major };

struct TopicNode {
  int id = 0;
  TopicLevel level = TopicLevel::leaf;
  std::string summary;
  std::vector<std::string> member_ids;
  std::vector<double> centroid;
  std::optional<int> parent_id;
};

struct TopicTree {
  std::vector<TopicNode> leaves;
  std::vector<TopicNode> majors;
  std::vector<std::string> outlier_ids;

  const TopicNode& leaf(int id) const;
  const TopicNode& major(int id) const;
  /// Instance id -> leaf id, outliers omitted.
  std::map<std::string, int> leaf_of_member() const;
  /// Leaf id -> major id.
  std::map<int, int> major_of_leaf() const;
  /// Checks disjoint leaves, full coverage of `all_ids` and one parent per leaf.
  void validate(std::span<const std::string> all_ids) const;
};

struct TopicConfig {
  std::size_t target_dim = 5;
  std::size_t min_cluster_size = 20;
  std::size_t min_samples = 0;  // 0 means min_cluster_size
  double reassign_threshold = 0.1;
  bool comprehensive_reassign = true;
  std::size_t n_representatives = 5;
  std::size_t major_min_cluster_size = 2;
  kernels::Execution exec = kernels::Execution::parallel;
};

/// Texts to cluster with their ids (instance ids for queries).
struct Corpus {
  std::vector<std::string> ids;
  std::vector<std::string> texts;
};

/// Leaf id -> major label text; when non-empty it decides the major level.
using OverrideMap = std::map<int, std::string>;

/// Member indices ordered by cosine distance to `centroid`, nearest first
/// (ties by index), truncated to n.
std::vector<std::size_t> representatives(const DenseMatrix& embeddings,
                                         std::span<const std::size_t> members,
                                         std::span<const double> centroid, std::size_t n);

std::string render_summary_prompt(int cluster_id, TopicLevel level,
                                  const std::vector<std::string>& examples);

/// First non-empty line, unquoted, capped at eight words.
std::string clean_summary(std::string_view completion);

/// Fills each node's summary from the provider using its representatives.
/// When the provider is null or fails, the summary is the node's top three
/// c-TF-IDF terms joined by spaces.
void summarize_topics(std::vector<TopicNode>& nodes, const Corpus& corpus,
                      const DenseMatrix& embeddings, providers::ChatProvider* chat,
                      std::size_t n_representatives = 5);

/// Embeds texts into an n x dim matrix of unit rows.
DenseMatrix embed_corpus(const Corpus& corpus, providers::Embedder& embedder);

/// The density stage on embeddings: reduce -> hdbscan -> conservative then
/// (optionally) comprehensive reassignment.
ClusterLabeling cluster_embeddings(const DenseMatrix& embeddings,
                                   const std::vector<std::string>& texts,
                                   const TopicConfig& config);

/// Full pipeline: embed, reduce to config.target_dim, hdbscan, reassign,
/// summarize leaves, then cluster leaf centroids into majors (or apply the
/// override map). Throws Error when no leaf comes out.
TopicTree build_topic_tree(const Corpus& corpus, providers::Embedder& embedder,
                           providers::ChatProvider* chat, const TopicConfig& config,
                           const OverrideMap& overrides = {});

/// Same, for precomputed unit embeddings.
TopicTree build_topic_tree(const Corpus& corpus, const DenseMatrix& embeddings,
                           providers::ChatProvider* chat, const TopicConfig& config,
                           const OverrideMap& overrides = {});

void save_topic_tree(const std::filesystem::path& path, const TopicTree& tree);
TopicTree load_topic_tree(const std::filesystem::path& path);

/// Override file: JSON object {"<leaf id>": "<major label>"}.
OverrideMap load_override_map(const std::filesystem::path& path);

}  // namespace prefboard::clustering

#include "prefboard/clustering/topic_tree.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "prefboard/clustering/ctfidf.hpp"
#include "prefboard/clustering/pca.hpp"
#include "prefboard/clustering/reassign.hpp"
#include "prefboard/core/error.hpp"
#include "prefboard/core/io.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::clustering {

const TopicNode& TopicTree::leaf(int id) const {
  for (const auto& n : leaves) {
    if (n.id == id) return n;
  }
  throw ValidationError("no leaf topic " + std::to_string(id));
}

const TopicNode& TopicTree::major(int id) const {
  for (const auto& n : majors) {
    if (n.id == id) return n;
  }
  throw ValidationError("no major topic " + std::to_string(id));
}

std::map<std::string, int> TopicTree::leaf_of_member() const {
  std::map<std::string, int> out;
  for (const auto& n : leaves) {
    for (const auto& m : n.member_ids) out.emplace(m, n.id);
  }
  return out;
}

std::map<int, int> TopicTree::major_of_leaf() const {
  std::map<int, int> out;
  for (const auto& n : leaves) {
    if (n.parent_id) out.emplace(n.id, *n.parent_id);
  }
  return out;
}

void TopicTree::validate(std::span<const std::string> all_ids) const {
  std::set<std::string> seen;
  for (const auto& n : leaves) {
    for (const auto& m : n.member_ids) {
      if (!seen.insert(m).second) throw ValidationError("member " + m + " is in two leaves");
    }
  }
  for (const auto& m : outlier_ids) {
    if (!seen.insert(m).second) throw ValidationError("outlier " + m + " is also a leaf member");
  }
  const std::set<std::string> expected(all_ids.begin(), all_ids.end());
  if (seen != expected) throw ValidationError("topic tree does not cover the corpus exactly");
  std::set<int> major_ids;
  for (const auto& m : majors) major_ids.insert(m.id);
  for (const auto& n : leaves) {
    if (!n.parent_id || !major_ids.contains(*n.parent_id)) {
      throw ValidationError("leaf " + std::to_string(n.id) + " has no major parent");
    }
  }
}

std::vector<std::size_t> representatives(const DenseMatrix& embeddings,
                                         std::span<const std::size_t> members,
                                         std::span<const double> centroid, std::size_t n) {
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(members.size());
  for (auto i : members) {
    dist.emplace_back(1.0 - cosine_similarity(embeddings.row(i), centroid), i);
  }
  std::sort(dist.begin(), dist.end());
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < std::min(n, dist.size()); ++k) out.push_back(dist[k].second);
  return out;
}

std::string render_summary_prompt(int cluster_id, TopicLevel level,
                                  const std::vector<std::string>& examples) {
  std::string p = "Cluster id: " + std::to_string(cluster_id) + "\n";
  p += std::string("Level: ") + (level == TopicLevel::leaf ? "leaf" : "major") + "\n";
  p += "The texts below were grouped together. Name their shared topic in at most eight "
       "words. Reply with the name only.\n\n";
  for (std::size_t i = 0; i < examples.size(); ++i) {
    p += std::to_string(i + 1) + ". " + text::collapse_whitespace(examples[i]) + "\n";
  }
  return p;
}

std::string clean_summary(std::string_view completion) {
  const std::string norm = text::normalize_newlines(completion);
  std::string line;
  std::size_t start = 0;
  while (start <= norm.size()) {
    const auto end = norm.find('\n', start);
    line = text::trim(std::string_view(norm).substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (!line.empty() || end == std::string::npos) break;
    start = end + 1;
  }
  while (!line.empty() && (line.front() == '"' || line.front() == '\'' || line.front() == '*')) {
    line.erase(line.begin());
  }
  while (!line.empty() && (line.back() == '"' || line.back() == '\'' || line.back() == '*' ||
                           line.back() == '.')) {
    line.pop_back();
  }
  std::vector<std::string> words;
  std::size_t i = 0;
  const std::string collapsed = text::collapse_whitespace(line);
  while (i < collapsed.size() && words.size() < 8) {
    auto j = collapsed.find(' ', i);
    if (j == std::string::npos) j = collapsed.size();
    words.push_back(collapsed.substr(i, j - i));
    i = j + 1;
  }
  return text::join(words, " ");
}

namespace {

std::map<std::string, std::size_t> index_of(const Corpus& corpus) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < corpus.ids.size(); ++i) out.emplace(corpus.ids[i], i);
  return out;
}

std::vector<double> mean_row(const DenseMatrix& m, std::span<const std::size_t> rows) {
  std::vector<double> c(m.cols(), 0.0);
  for (auto i : rows) {
    const auto r = m.row(i);
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += r[j];
  }
  if (!rows.empty()) {
    for (double& x : c) x /= static_cast<double>(rows.size());
  }
  return c;
}

std::vector<std::string> fallback_terms(const std::vector<TopicNode>& nodes, const Corpus& corpus,
                                        const std::map<std::string, std::size_t>& idx,
                                        std::size_t which) {
  std::map<int, std::vector<std::string>> docs;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    auto& d = docs[static_cast<int>(k)];
    for (const auto& m : nodes[k].member_ids) d.push_back(corpus.texts[idx.at(m)]);
    if (d.empty()) d.emplace_back();
  }
  if (docs.size() < 2) docs[static_cast<int>(nodes.size())] = {""};
  try {
    return Ctfidf(docs).top_terms(static_cast<int>(which), 3);
  } catch (const ValidationError&) {
    return {};
  }
}

}  // namespace

void summarize_topics(std::vector<TopicNode>& nodes, const Corpus& corpus,
                      const DenseMatrix& embeddings, providers::ChatProvider* chat,
                      std::size_t n_representatives) {
  const auto idx = index_of(corpus);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    auto& node = nodes[k];
    std::vector<std::size_t> members;
    for (const auto& m : node.member_ids) members.push_back(idx.at(m));
    const auto reps = representatives(embeddings, members, node.centroid, n_representatives);
    std::vector<std::string> examples;
    for (auto i : reps) examples.push_back(corpus.texts[i]);
    std::string summary;
    if (chat != nullptr) {
      try {
        summary = clean_summary(providers::chat_complete(
            *chat, render_summary_prompt(node.id, node.level, examples), std::string(kSummarySchema)));
      } catch (const Error& e) {
        spdlog::warn("topic {} summary failed, using top terms: {}", node.id, e.what());
      }
    }
    if (summary.empty()) summary = text::join(fallback_terms(nodes, corpus, idx, k), " ");
    node.summary = summary;
  }
}

DenseMatrix embed_corpus(const Corpus& corpus, providers::Embedder& embedder) {
  const auto vecs = providers::embed_texts(corpus.texts, embedder);
  DenseMatrix out(vecs.size(), vecs.front().dim());
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    std::copy(vecs[i].values.begin(), vecs[i].values.end(), out.row(i).begin());
  }
  return out;
}

ClusterLabeling cluster_embeddings(const DenseMatrix& embeddings,
                                   const std::vector<std::string>& texts,
                                   const TopicConfig& config) {
  const auto reduced = reduce_dims(embeddings, config.target_dim);
  auto labeling =
      hdbscan(reduced, HdbscanParams{config.min_cluster_size, config.min_samples, config.exec});
  if (labeling.cluster_count() == 0) return labeling;
  labeling = reassign_outliers(texts, embeddings, labeling, ReassignStrategy::ctfidf_conservative,
                               config.reassign_threshold);
  if (config.comprehensive_reassign) {
    labeling = reassign_outliers(texts, embeddings, labeling,
                                 ReassignStrategy::distribution_comprehensive);
  }
  return labeling;
}

namespace {

std::vector<TopicNode> majors_by_override(std::vector<TopicNode>& leaves,
                                          const OverrideMap& overrides) {
  std::vector<TopicNode> majors;
  std::map<std::string, int> id_of_label;
  for (auto& leaf : leaves) {
    const auto it = overrides.find(leaf.id);
    if (it == overrides.end()) {
      throw ValidationError("override map does not place leaf " + std::to_string(leaf.id));
    }
    auto [pos, inserted] = id_of_label.try_emplace(it->second, static_cast<int>(majors.size()));
    if (inserted) {
      TopicNode m;
      m.id = pos->second;
      m.level = TopicLevel::major;
      m.summary = it->second;
      majors.push_back(std::move(m));
    }
    leaf.parent_id = pos->second;
  }
  return majors;
}

std::vector<TopicNode> majors_by_clustering(std::vector<TopicNode>& leaves,
                                            const TopicConfig& config) {
  const std::size_t n = leaves.size();
  const std::size_t dim = leaves.front().centroid.size();
  std::vector<int> labels(n, kNoise);
  const std::size_t target = std::min({config.target_dim, n > 0 ? n - 1 : 0, dim});
  if (n >= 3 && target >= 1) {
    DenseMatrix centroids(n, dim);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy(leaves[i].centroid.begin(), leaves[i].centroid.end(), centroids.row(i).begin());
    }
    const auto reduced = reduce_dims(centroids, target);
    labels = hdbscan(reduced, HdbscanParams{config.major_min_cluster_size, 0, config.exec}).labels;
  }
  // Leaves the centroid clustering leaves unassigned become majors of their own.
  int next = *std::max_element(labels.begin(), labels.end()) + 1;
  for (int& l : labels) {
    if (l == kNoise) l = next++;
  }
  const auto canon = canonical_labels(labels);
  std::vector<TopicNode> majors(static_cast<std::size_t>(canon.cluster_count()));
  for (std::size_t m = 0; m < majors.size(); ++m) {
    majors[m].id = static_cast<int>(m);
    majors[m].level = TopicLevel::major;
  }
  for (std::size_t i = 0; i < n; ++i) leaves[i].parent_id = canon.labels[i];
  return majors;
}

}  // namespace

TopicTree build_topic_tree(const Corpus& corpus, providers::Embedder& embedder,
                           providers::ChatProvider* chat, const TopicConfig& config,
                           const OverrideMap& overrides) {
  return build_topic_tree(corpus, embed_corpus(corpus, embedder), chat, config, overrides);
}

TopicTree build_topic_tree(const Corpus& corpus, const DenseMatrix& embeddings,
                           providers::ChatProvider* chat, const TopicConfig& config,
                           const OverrideMap& overrides) {
  const auto n = corpus.ids.size();
  if (corpus.texts.size() != n || embeddings.rows() != n) {
    throw ValidationError("corpus ids, texts and embeddings differ in length");
  }
  if (n < 2 * config.min_cluster_size) {
    throw ValidationError("topic pipeline needs at least " +
                          std::to_string(2 * config.min_cluster_size) + " texts, got " +
                          std::to_string(n));
  }
  const auto labeling = cluster_embeddings(embeddings, corpus.texts, config);

  TopicTree tree;
  std::vector<std::vector<std::size_t>> kept;
  for (auto& members : labeling.members()) {
    if (members.size() >= config.min_cluster_size) {
      kept.push_back(std::move(members));
    } else {
      for (auto i : members) tree.outlier_ids.push_back(corpus.ids[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labeling.labels[i] == kNoise) tree.outlier_ids.push_back(corpus.ids[i]);
  }
  std::sort(tree.outlier_ids.begin(), tree.outlier_ids.end());
  if (kept.empty()) throw Error("topic pipeline produced no clusters");

  for (std::size_t k = 0; k < kept.size(); ++k) {
    TopicNode leaf;
    leaf.id = static_cast<int>(k);
    leaf.level = TopicLevel::leaf;
    for (auto i : kept[k]) leaf.member_ids.push_back(corpus.ids[i]);
    leaf.centroid = mean_row(embeddings, kept[k]);
    tree.leaves.push_back(std::move(leaf));
  }
  summarize_topics(tree.leaves, corpus, embeddings, chat, config.n_representatives);

  tree.majors = overrides.empty() ? majors_by_clustering(tree.leaves, config)
                                  : majors_by_override(tree.leaves, overrides);
  const auto idx = index_of(corpus);
  for (auto& major : tree.majors) {
    std::vector<std::size_t> rows;
    for (const auto& leaf : tree.leaves) {
      if (leaf.parent_id != major.id) continue;
      for (const auto& m : leaf.member_ids) {
        major.member_ids.push_back(m);
        rows.push_back(idx.at(m));
      }
    }
    major.centroid = mean_row(embeddings, rows);
  }
  if (overrides.empty()) {
    summarize_topics(tree.majors, corpus, embeddings, chat, config.n_representatives);
  }
  return tree;
}

namespace {

Json node_json(const TopicNode& n) {
  Json j{{"id", n.id}, {"summary", n.summary}, {"member_ids", n.member_ids},
         {"centroid", n.centroid}};
  if (n.parent_id) j["parent_id"] = *n.parent_id;
  return j;
}

TopicNode node_from(const Json& j, TopicLevel level) {
  TopicNode n;
  n.id = j.at("id").get<int>();
  n.level = level;
  n.summary = j.at("summary").get<std::string>();
  n.member_ids = j.value("member_ids", std::vector<std::string>{});
  n.centroid = j.value("centroid", std::vector<double>{});
  if (j.contains("parent_id") && !j["parent_id"].is_null()) n.parent_id = j["parent_id"].get<int>();
  return n;
}

}  // namespace

void save_topic_tree(const std::filesystem::path& path, const TopicTree& tree) {
  Json j;
  j["leaves"] = Json::array();
  for (const auto& n : tree.leaves) j["leaves"].push_back(node_json(n));
  j["majors"] = Json::array();
  for (const auto& n : tree.majors) j["majors"].push_back(node_json(n));
  j["outliers"] = tree.outlier_ids;
  write_file_atomic(path, dump_stable(j));
}

TopicTree load_topic_tree(const std::filesystem::path& path) {
  try {
    const Json j = Json::parse(read_file(path));
    TopicTree tree;
    for (const auto& n : j.at("leaves")) tree.leaves.push_back(node_from(n, TopicLevel::leaf));
    for (const auto& n : j.at("majors")) tree.majors.push_back(node_from(n, TopicLevel::major));
    tree.outlier_ids = j.value("outliers", std::vector<std::string>{});
    return tree;
  } catch (const Json::exception& e) {
    throw ParseError("topic tree " + path.string() + ": " + e.what(), 0);
  }
}

OverrideMap load_override_map(const std::filesystem::path& path) {
  OverrideMap out;
  try {
    const Json j = Json::parse(read_file(path));
    for (const auto& [key, value] : j.items()) out.emplace(std::stoi(key), value.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError("override map " + path.string() + ": " + e.what(), 0);
  }
  return out;
}

}  // namespace prefboard::clustering

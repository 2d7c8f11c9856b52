#include "prefboard/clustering/ctfidf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prefboard/core/error.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::clustering {

Ctfidf::Ctfidf(const std::map<int, std::vector<std::string>>& docs_by_class) {
  if (docs_by_class.size() < 2) throw ValidationError("c-TF-IDF needs at least two classes");
  std::vector<std::map<std::string, double>> counts;
  std::map<std::string, double> total;
  double words = 0.0;
  for (const auto& [cls, docs] : docs_by_class) {
    if (docs.empty()) {
      throw ValidationError("c-TF-IDF class " + std::to_string(cls) + " has no documents");
    }
    classes_.push_back(cls);
    auto& c = counts.emplace_back();
    for (const auto& doc : docs) {
      for (const auto& tok : text::tokenize_words(doc)) {
        c[tok] += 1.0;
        total[tok] += 1.0;
        words += 1.0;
      }
    }
  }
  if (total.empty()) throw ValidationError("c-TF-IDF vocabulary is empty");
  avg_words_ = words / static_cast<double>(classes_.size());
  for (const auto& [term, f] : total) {
    index_.emplace(term, vocab_.size());
    vocab_.push_back(term);
    idf_.push_back(std::log(1.0 + avg_words_ / f));
  }
  for (const auto& c : counts) {
    auto& w = weights_.emplace_back(vocab_.size(), 0.0);
    for (const auto& [term, tf] : c) {
      const auto i = index_.at(term);
      w[i] = tf * idf_[i];
    }
  }
}

std::size_t Ctfidf::class_index(int class_id) const {
  const auto it = std::lower_bound(classes_.begin(), classes_.end(), class_id);
  if (it == classes_.end() || *it != class_id) {
    throw ValidationError("unknown c-TF-IDF class " + std::to_string(class_id));
  }
  return static_cast<std::size_t>(it - classes_.begin());
}

double Ctfidf::weight(const std::string& term, int class_id) const {
  const auto& w = weights_[class_index(class_id)];
  const auto it = index_.find(term);
  return it == index_.end() ? 0.0 : w[it->second];
}

const std::vector<double>& Ctfidf::class_vector(int class_id) const {
  return weights_[class_index(class_id)];
}

std::vector<double> Ctfidf::transform(const std::string& doc) const {
  std::vector<double> v(vocab_.size(), 0.0);
  for (const auto& tok : text::tokenize_words(doc)) {
    const auto it = index_.find(tok);
    if (it != index_.end()) v[it->second] += idf_[it->second];
  }
  return v;
}

std::vector<std::string> Ctfidf::top_terms(int class_id, std::size_t n) const {
  const auto& w = weights_[class_index(class_id)];
  std::vector<std::size_t> order(vocab_.size());
  std::iota(order.begin(), order.end(), 0);
  // vocabulary is sorted, so a stable sort on weight keeps ties alphabetical
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return w[a] > w[b]; });
  std::vector<std::string> out;
  for (auto i : order) {
    if (out.size() == n || w[i] <= 0.0) break;
    out.push_back(vocab_[i]);
  }
  return out;
}

}  // namespace prefboard::clustering

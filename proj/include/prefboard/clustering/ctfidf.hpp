#pragma once

#include <map>
#include <string>
#include <vector>

namespace prefboard::clustering {

/// Class-based TF-IDF: weight(t, c) = tf(t, c) * ln(1 + A / f_t) where tf is
/// the raw count of t in the concatenated documents of class c, A the average
/// word count per class and f_t the count of t over all classes.
class Ctfidf {
 public:
  /// docs_by_class: class id -> documents. Needs >= 2 classes, each with a
  /// document; throws ValidationError otherwise or when no token exists.
  explicit Ctfidf(const std::map<int, std::vector<std::string>>& docs_by_class);

  const std::vector<std::string>& vocabulary() const noexcept { return vocab_; }
  const std::vector<int>& classes() const noexcept { return classes_; }
  double average_words() const noexcept { return avg_words_; }

  double weight(const std::string& term, int class_id) const;
  /// Dense weight vector of a class over the vocabulary.
  const std::vector<double>& class_vector(int class_id) const;
  /// Raw term counts of `doc` times the idf factor; terms outside the
  /// vocabulary are dropped.
  std::vector<double> transform(const std::string& doc) const;
  /// Highest-weighted terms of a class, ties alphabetical.
  std::vector<std::string> top_terms(int class_id, std::size_t n) const;

 private:
  std::size_t class_index(int class_id) const;

  std::vector<std::string> vocab_;
  std::map<std::string, std::size_t> index_;
  std::vector<double> idf_;
  std::vector<int> classes_;
  std::vector<std::vector<double>> weights_;
  double avg_words_ = 0.0;
};

}  // namespace prefboard::clustering

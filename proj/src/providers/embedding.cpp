#include "prefboard/providers/embedding.hpp"

#include <cmath>

#include "http_transport.hpp"
#include "prefboard/core/error.hpp"
#include "prefboard/core/matrix.hpp"
#include "prefboard/core/text.hpp"

namespace prefboard::providers {

std::vector<EmbeddingVector> embed_texts(std::span<const std::string> texts, Embedder& embedder) {
  if (texts.empty()) throw ValidationError("embed_texts needs at least one text");
  auto vectors = embedder.embed(texts);
  if (vectors.size() != texts.size()) {
    throw ValidationError("embedder returned " + std::to_string(vectors.size()) + " vectors for " +
                          std::to_string(texts.size()) + " texts");
  }
  const std::size_t dim = vectors.front().dim();
  if (dim == 0) throw ValidationError("embedder returned empty vectors");
  for (auto& v : vectors) {
    if (v.dim() != dim) throw ValidationError("embedding dimension mismatch within batch");
    for (double x : v.values) {
      if (!std::isfinite(x)) throw ValidationError("embedding has non-finite entries");
    }
    if (!l2_normalize(v.values)) throw ValidationError("embedding is the zero vector");
  }
  return vectors;
}

MockEmbedder::MockEmbedder(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ValidationError("embedding dim must be positive");
}

std::string MockEmbedder::id() const { return "mock-bow-" + std::to_string(dim_); }

std::size_t MockEmbedder::bucket(std::string_view token) const {
  return static_cast<std::size_t>(text::fnv1a64(token) % dim_);
}

EmbeddingVector MockEmbedder::embed_one(std::string_view s) const {
  EmbeddingVector v;
  v.values.assign(dim_, 0.0);
  const auto tokens = text::tokenize_words(s);
  if (tokens.empty()) {
    v.values[bucket("")] = 1.0;
    return v;
  }
  for (const auto& t : tokens) v.values[bucket(t)] += 1.0;
  l2_normalize(v.values);
  return v;
}

std::vector<EmbeddingVector> MockEmbedder::embed(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

HttpEmbedder::HttpEmbedder(ProviderConfig config, std::size_t expected_dim)
    : config_(std::move(config)), dim_(expected_dim) {
  config_.validate();
}

std::vector<EmbeddingVector> HttpEmbedder::embed(std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  const auto policy = RetryPolicy::from(config_);
  for (std::size_t start = 0, batch = 0; start < texts.size();
       start += config_.batch_size, ++batch) {
    const std::size_t end = std::min(texts.size(), start + config_.batch_size);
    nlohmann::json body;
    body["model"] = config_.model_name;
    body["input"] = std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                             texts.begin() + static_cast<std::ptrdiff_t>(end));
    nlohmann::json response;
    try {
      run_with_retry(policy, "embedding batch " + std::to_string(batch),
                     [&] { response = detail::post_json(config_, "/embeddings", body); });
    } catch (const TransportError& e) {
      throw TransportError(e.what(), batch);
    }
    try {
      const auto& data = response.at("data");
      if (data.size() != end - start) {
        throw ValidationError("embedding response has wrong item count");
      }
      for (const auto& item : data) {
        EmbeddingVector v{item.at("embedding").get<std::vector<double>>()};
        if (dim_ == 0) dim_ = v.dim();
        if (v.dim() != dim_) {
          throw ValidationError("embedding dim " + std::to_string(v.dim()) + " != expected " +
                                std::to_string(dim_) + " in batch " + std::to_string(batch));
        }
        out.push_back(std::move(v));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error("malformed embedding response in batch " + std::to_string(batch) + ": " +
                  e.what());
    }
  }
  return out;
}

std::vector<EmbeddingVector> CachingEmbedder::embed(std::span<const std::string> texts) {
  std::vector<std::string> missing;
  {
    std::lock_guard lock(mutex_);
    for (const auto& t : texts) {
      if (!cache_.contains(t)) missing.push_back(t);
    }
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  if (!missing.empty()) {
    auto fresh = inner_->embed(missing);
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(missing[i], std::move(fresh[i]));
  }
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  std::lock_guard lock(mutex_);
  for (const auto& t : texts) out.push_back(cache_.at(t));
  return out;
}

std::size_t CachingEmbedder::cached() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

}  // namespace prefboard::providers

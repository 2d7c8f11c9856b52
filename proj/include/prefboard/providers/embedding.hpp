#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "prefboard/providers/provider_config.hpp"

namespace prefboard::providers {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const noexcept { return values.size(); }
};

/// Text -> dense vector. Implementations must be safe for concurrent calls.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::vector<EmbeddingVector> embed(std::span<const std::string> texts) = 0;
  virtual std::size_t dim() const = 0;
  virtual std::string id() const = 0;
};

/// One unit vector per input, in input order. Throws ValidationError on an
/// empty input, a dimension mismatch or non-finite entries.
std::vector<EmbeddingVector> embed_texts(std::span<const std::string> texts, Embedder& embedder);

/// Hashed bag of words: lowercase word tokens, FNV-1a bucketed into `dim`
/// counts, L2-normalized. Text without tokens embeds as the empty token.
class MockEmbedder final : public Embedder {
 public:
  explicit MockEmbedder(std::size_t dim = 64);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  std::size_t dim() const override { return dim_; }
  std::string id() const override;

  std::size_t bucket(std::string_view token) const;
  EmbeddingVector embed_one(std::string_view text) const;

 private:
  std::size_t dim_;
};

/// POST {base_url}/embeddings with {model, input:[texts]} in batches of
/// config.batch_size, each batch retried with exponential backoff.
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(ProviderConfig config, std::size_t expected_dim = 0);

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  std::size_t dim() const override { return dim_; }
  std::string id() const override { return "http:" + config_.model_name; }

 private:
  ProviderConfig config_;
  std::size_t dim_;
};

/// Memoizes another embedder by exact text.
class CachingEmbedder final : public Embedder {
 public:
  explicit CachingEmbedder(std::shared_ptr<Embedder> inner) : inner_(std::move(inner)) {}

  std::vector<EmbeddingVector> embed(std::span<const std::string> texts) override;
  std::size_t dim() const override { return inner_->dim(); }
  std::string id() const override { return inner_->id(); }
  std::size_t cached() const;

 private:
  std::shared_ptr<Embedder> inner_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, EmbeddingVector> cache_;
};

}  // namespace prefboard::providers

#pragma once

#include <Eigen/Core>
#include <string>

#include "omnivic/remote.hpp"

namespace omnivic {

// Maps instruction text to a unit-norm vector. Implementations must be
// deterministic for a fixed configuration.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual Eigen::VectorXd embed(const std::string& text) const = 0;
  virtual int dim() const = 0;
};

// Token-hash bag of words: lowercase alphanumeric tokens are hashed into
// `dim` buckets and the count vector is L2-normalized. Needs no network and
// no model weights, so it doubles as the fallback when no remote embedder is
// configured. Texts with no alphanumeric characters hash as a single token
// so the result is still unit-norm; empty text throws.
class HashEmbedder final : public EmbeddingProvider {
 public:
  explicit HashEmbedder(int dim = 256);
  Eigen::VectorXd embed(const std::string& text) const override;
  int dim() const override { return dim_; }

 private:
  int dim_;
};

// Asks a chat endpoint for an embedding. The reply content must be a JSON
// array of `dim` numbers; anything else raises BackendError. Normalizes the
// result.
class RemoteEmbedder final : public EmbeddingProvider {
 public:
  RemoteEmbedder(EndpointConfig endpoint, int dim);
  Eigen::VectorXd embed(const std::string& text) const override;
  int dim() const override { return dim_; }

 private:
  EndpointConfig endpoint_;
  int dim_;
};

}  // namespace omnivic

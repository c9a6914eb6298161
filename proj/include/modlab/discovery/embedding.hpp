#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace modlab::discovery {

using Vector = std::vector<double>;
using Vectors = std::vector<Vector>;

struct Embeddings {
  Vectors vectors;
  /// Indices of texts that produced a zero vector (no usable tokens).
  std::vector<std::size_t> flagged;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  /// Throws DataError on empty input.
  virtual Embeddings embed(const std::vector<std::string>& texts) = 0;
  virtual std::string name() const = 0;
};

/// L2-normalised term-frequency vectors over the sorted vocabulary of the
/// texts passed to each call.
class TermFrequencyEmbedder : public Embedder {
 public:
  Embeddings embed(const std::vector<std::string>& texts) override;
  std::string name() const override { return "term-frequency"; }
};

/// OpenAI-style /embeddings endpoint; base URL and key from
/// MODLAB_API_BASE / MODLAB_API_KEY unless given.
class HttpEmbedder : public Embedder {
 public:
  HttpEmbedder(std::string model, std::string base_url, std::string api_key,
               std::size_t batch_size = 128);
  static std::unique_ptr<HttpEmbedder> from_environment(std::string model);

  Embeddings embed(const std::vector<std::string>& texts) override;
  std::string name() const override { return "http:" + model_; }

 private:
  std::string model_;
  std::string base_url_;
  std::string api_key_;
  std::size_t batch_size_;
};

double cosine(const Vector& a, const Vector& b);

enum class ReducerKind { identity, pca, umap };

std::string_view to_string(ReducerKind kind);
ReducerKind reducer_kind_from_string(std::string_view s);

struct ReducerParams {
  ReducerKind kind = ReducerKind::umap;
  std::size_t n_neighbors = 10;
  double min_dist = 0.1;
  std::size_t target_dim = 5;
  std::size_t n_epochs = 500;
};

/// Projects to `target_dim` dimensions. Identity requires the input to be
/// at target_dim already. Throws DataError with fewer than target_dim + 1
/// vectors.
Vectors reduce_dim(const Vectors& vectors, const ReducerParams& params, std::uint64_t seed);

/// Principal-component scores, each axis sign-fixed so its largest
/// loading is positive; zero-padded past the data rank.
Vectors pca(const Vectors& vectors, std::size_t target_dim);

/// (a, b) of the low-dimensional similarity 1 / (1 + a d^(2b)) fitted to the
/// min_dist offset curve with unit spread.
std::pair<double, double> fit_ab(double min_dist, double spread = 1.0);

}  // namespace modlab::discovery

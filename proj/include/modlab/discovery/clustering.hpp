#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modlab/discovery/embedding.hpp"

namespace modlab::discovery {

struct KMeansOptions {
  std::size_t max_iterations = 300;
  std::size_t n_init = 1;  // restarts; lowest inertia wins, earliest on ties
};

struct KMeansResult {
  std::vector<std::size_t> assignments;  // one per input vector
  Vectors centroids;
  double inertia = 0;
  std::size_t iterations = 0;
};

/// Lloyd iterations from weighted k-means++ seeding over the distinct
/// vectors. Throws DataError when k exceeds the number of distinct vectors
/// and ConfigError when k is zero.
KMeansResult cluster_kmeans(const Vectors& vectors, std::size_t k, std::uint64_t seed,
                            const KMeansOptions& options = {});

std::size_t count_distinct(const Vectors& vectors);

/// Keyword ranking per cluster: tf (share of the cluster's tokens) times
/// log(n_clusters / number of clusters containing the term); ties by tf,
/// then alphabetically. Empty clusters get no keywords.
std::vector<std::vector<std::string>> class_tfidf_keywords(
    const std::vector<std::vector<std::string>>& doc_tokens,
    const std::vector<std::size_t>& assignments, std::size_t n_clusters, std::size_t top_n);

struct Coherence {
  std::optional<double> score;                     // size-weighted over clusters
  std::vector<std::optional<double>> per_cluster;  // nullopt below two keywords
};

/// NPMI of word pairs over sliding windows of `window` tokens; a document
/// shorter than the window is a single window.
class NpmiTable {
 public:
  NpmiTable(const std::vector<std::vector<std::string>>& doc_tokens, std::size_t window = 10);
  /// -1 for pairs that never co-occur, 1 for pairs present in every window.
  double npmi(const std::string& a, const std::string& b) const;
  std::size_t windows() const { return n_windows_; }

 private:
  std::size_t n_windows_ = 0;
  std::vector<std::vector<std::string>> window_sets_;
  std::size_t count(const std::string& a) const;
  std::size_t count(const std::string& a, const std::string& b) const;
};

/// Mean pairwise NPMI of each cluster's keywords, then the mean over
/// clusters weighted by cluster size.
Coherence score_coherence(const std::vector<std::vector<std::string>>& doc_tokens,
                          const std::vector<std::vector<std::string>>& cluster_keywords,
                          const std::vector<std::size_t>& cluster_sizes, std::size_t window = 10);

}  // namespace modlab::discovery

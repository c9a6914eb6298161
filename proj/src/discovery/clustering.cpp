#include "modlab/discovery/clustering.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "modlab/error.hpp"

namespace modlab::discovery {

namespace {

double sq_dist(const Vector& a, const Vector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Index drawn with probability proportional to `weights`.
std::size_t draw(const std::vector<double>& weights, std::mt19937_64& rng) {
  double total = 0;
  for (double w : weights) total += w;
  double u = unit(rng) * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0) return i;
  return 0;
}

struct Distinct {
  Vectors points;
  std::vector<double> weights;
  std::vector<std::size_t> of_input;  // input index -> distinct index
};

Distinct deduplicate(const Vectors& vectors) {
  Distinct d;
  std::map<Vector, std::size_t> seen;
  for (const auto& v : vectors) {
    auto [it, inserted] = seen.emplace(v, d.points.size());
    if (inserted) {
      d.points.push_back(v);
      d.weights.push_back(0);
    }
    d.weights[it->second] += 1;
    d.of_input.push_back(it->second);
  }
  return d;
}

KMeansResult lloyd(const Distinct& d, std::size_t k, std::uint64_t seed, std::size_t max_iter) {
  std::mt19937_64 rng(seed);
  const std::size_t n = d.points.size();
  const std::size_t dim = d.points.front().size();

  Vectors centroids;
  centroids.push_back(d.points[draw(d.weights, rng)]);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (centroids.size() < k) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], sq_dist(d.points[i], centroids.back()));
      p[i] = d.weights[i] * nearest[i];
    }
    centroids.push_back(d.points[draw(p, rng)]);
  }

  std::vector<std::size_t> assign(n, k);
  KMeansResult r;
  for (r.iterations = 1; r.iterations <= max_iter; ++r.iterations) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = sq_dist(d.points[i], centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double dc = sq_dist(d.points[i], centroids[c]);
        if (dc < best_d) {
          best_d = dc;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    // Empty clusters take the point farthest from its centroid.
    for (std::size_t c = 0; c < k; ++c) {
      if (std::find(assign.begin(), assign.end(), c) != assign.end()) continue;
      std::size_t far = 0;
      double far_d = -1;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t members =
            static_cast<std::size_t>(std::count(assign.begin(), assign.end(), assign[i]));
        if (members < 2) continue;
        const double di = sq_dist(d.points[i], centroids[assign[i]]);
        if (di > far_d) {
          far_d = di;
          far = i;
        }
      }
      assign[far] = c;
      changed = true;
    }
    Vectors next(k, Vector(dim, 0.0));
    std::vector<double> mass(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      mass[assign[i]] += d.weights[i];
      for (std::size_t j = 0; j < dim; ++j) next[assign[i]][j] += d.weights[i] * d.points[i][j];
    }
    for (std::size_t c = 0; c < k; ++c)
      for (double& v : next[c]) v /= mass[c];
    centroids = std::move(next);
    if (!changed) break;
  }
  r.iterations = std::min(r.iterations, max_iter);
  r.centroids = std::move(centroids);
  r.assignments.resize(d.of_input.size());
  for (std::size_t i = 0; i < d.of_input.size(); ++i) r.assignments[i] = assign[d.of_input[i]];
  for (std::size_t i = 0; i < n; ++i) r.inertia += d.weights[i] * sq_dist(d.points[i], r.centroids[assign[i]]);
  return r;
}

}  // namespace

std::size_t count_distinct(const Vectors& vectors) {
  return std::set<Vector>(vectors.begin(), vectors.end()).size();
}

KMeansResult cluster_kmeans(const Vectors& vectors, std::size_t k, std::uint64_t seed,
                            const KMeansOptions& options) {
  if (k == 0) throw ConfigError("k-means: k must be positive");
  if (vectors.empty()) throw DataError("k-means: no vectors");
  const Distinct d = deduplicate(vectors);
  if (k > d.points.size())
    throw DataError(fmt::format("k-means: k = {} exceeds the {} distinct points", k, d.points.size()));
  const std::size_t restarts = std::max<std::size_t>(1, options.n_init);
  std::optional<KMeansResult> best;
  std::mt19937_64 seeder(seed);
  for (std::size_t r = 0; r < restarts; ++r) {
    const std::uint64_t run_seed = r == 0 ? seed : seeder();
    KMeansResult res = lloyd(d, k, run_seed, options.max_iterations);
    if (!best || res.inertia < best->inertia) best = std::move(res);
  }
  return *best;
}

std::vector<std::vector<std::string>> class_tfidf_keywords(
    const std::vector<std::vector<std::string>>& doc_tokens,
    const std::vector<std::size_t>& assignments, std::size_t n_clusters, std::size_t top_n) {
  if (doc_tokens.size() != assignments.size())
    throw DataError("keywords: assignments do not cover the documents");
  std::vector<std::map<std::string, double>> tf(n_clusters);
  std::vector<double> totals(n_clusters, 0.0);
  for (std::size_t d = 0; d < doc_tokens.size(); ++d) {
    const std::size_t c = assignments[d];
    if (c >= n_clusters) throw DataError("keywords: cluster index out of range");
    for (const auto& t : doc_tokens[d]) {
      tf[c][t] += 1;
      totals[c] += 1;
    }
  }
  std::map<std::string, std::size_t> cf;
  for (const auto& m : tf)
    for (const auto& [t, _] : m) ++cf[t];

  std::vector<std::vector<std::string>> out(n_clusters);
  for (std::size_t c = 0; c < n_clusters; ++c) {
    struct Scored {
      std::string term;
      double score, tf;
    };
    std::vector<Scored> scored;
    for (const auto& [t, count] : tf[c]) {
      const double f = count / totals[c];
      scored.push_back({t, f * std::log(static_cast<double>(n_clusters) / static_cast<double>(cf[t])), f});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.tf != b.tf) return a.tf > b.tf;
      return a.term < b.term;
    });
    for (std::size_t i = 0; i < scored.size() && i < top_n; ++i) out[c].push_back(scored[i].term);
  }
  return out;
}

NpmiTable::NpmiTable(const std::vector<std::vector<std::string>>& doc_tokens, std::size_t window) {
  if (window == 0) throw ConfigError("coherence window must be positive");
  for (const auto& doc : doc_tokens) {
    if (doc.empty()) continue;
    const std::size_t starts = doc.size() <= window ? 1 : doc.size() - window + 1;
    for (std::size_t s = 0; s < starts; ++s) {
      const auto end = std::min(doc.size(), s + window);
      std::vector<std::string> w(doc.begin() + static_cast<std::ptrdiff_t>(s),
                                 doc.begin() + static_cast<std::ptrdiff_t>(end));
      std::sort(w.begin(), w.end());
      w.erase(std::unique(w.begin(), w.end()), w.end());
      window_sets_.push_back(std::move(w));
    }
  }
  n_windows_ = window_sets_.size();
}

std::size_t NpmiTable::count(const std::string& a) const {
  std::size_t n = 0;
  for (const auto& w : window_sets_) n += std::binary_search(w.begin(), w.end(), a);
  return n;
}

std::size_t NpmiTable::count(const std::string& a, const std::string& b) const {
  std::size_t n = 0;
  for (const auto& w : window_sets_)
    n += std::binary_search(w.begin(), w.end(), a) && std::binary_search(w.begin(), w.end(), b);
  return n;
}

double NpmiTable::npmi(const std::string& a, const std::string& b) const {
  if (n_windows_ == 0) return -1.0;
  const double n = static_cast<double>(n_windows_);
  const double pab = static_cast<double>(count(a, b)) / n;
  if (pab == 0) return -1.0;
  if (pab == 1) return 1.0;
  const double pa = static_cast<double>(count(a)) / n;
  const double pb = static_cast<double>(count(b)) / n;
  return std::log(pab / (pa * pb)) / -std::log(pab);
}

Coherence score_coherence(const std::vector<std::vector<std::string>>& doc_tokens,
                          const std::vector<std::vector<std::string>>& cluster_keywords,
                          const std::vector<std::size_t>& cluster_sizes, std::size_t window) {
  if (cluster_keywords.size() != cluster_sizes.size())
    throw DataError("coherence: keyword and size lists differ in length");
  const NpmiTable table(doc_tokens, window);
  Coherence out;
  double num = 0, den = 0;
  for (std::size_t c = 0; c < cluster_keywords.size(); ++c) {
    const auto& kw = cluster_keywords[c];
    if (kw.size() < 2 || cluster_sizes[c] == 0) {
      out.per_cluster.push_back(std::nullopt);
      continue;
    }
    double sum = 0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < kw.size(); ++i)
      for (std::size_t j = i + 1; j < kw.size(); ++j) {
        sum += table.npmi(kw[i], kw[j]);
        ++pairs;
      }
    const double score = sum / static_cast<double>(pairs);
    out.per_cluster.push_back(score);
    num += static_cast<double>(cluster_sizes[c]) * score;
    den += static_cast<double>(cluster_sizes[c]);
  }
  if (den > 0) out.score = num / den;
  return out;
}

}  // namespace modlab::discovery

#include "modlab/discovery/embedding.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "modlab/discovery/text.hpp"
#include "modlab/error.hpp"

namespace modlab::discovery {

Embeddings TermFrequencyEmbedder::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) throw DataError("embed: no texts");
  std::vector<std::vector<std::string>> tokens;
  std::map<std::string, std::size_t> vocab;
  for (const auto& t : texts) {
    tokens.push_back(content_tokens(t));
    for (const auto& w : tokens.back()) vocab.emplace(w, 0);
  }
  std::size_t idx = 0;
  for (auto& [w, i] : vocab) i = idx++;

  Embeddings out;
  out.vectors.assign(texts.size(), Vector(vocab.size(), 0.0));
  for (std::size_t d = 0; d < texts.size(); ++d) {
    auto& v = out.vectors[d];
    for (const auto& w : tokens[d]) v[vocab.at(w)] += 1.0;
    double norm = 0;
    for (double x : v) norm += x * x;
    if (norm == 0) {
      out.flagged.push_back(d);
      continue;
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return out;
}

double cosine(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DataError("cosine: dimension mismatch");
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0 || bb == 0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

std::string_view to_string(ReducerKind kind) {
  switch (kind) {
    case ReducerKind::identity: return "identity";
    case ReducerKind::pca: return "pca";
    case ReducerKind::umap: return "umap";
  }
  return "?";
}

ReducerKind reducer_kind_from_string(std::string_view s) {
  if (s == "identity") return ReducerKind::identity;
  if (s == "pca") return ReducerKind::pca;
  if (s == "umap") return ReducerKind::umap;
  throw ConfigError("unknown reducer '" + std::string(s) + "' (expected identity|pca|umap)");
}

namespace {

Eigen::MatrixXd to_matrix(const Vectors& vs) {
  const auto n = static_cast<Eigen::Index>(vs.size());
  const auto d = static_cast<Eigen::Index>(vs.front().size());
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(vs[i].size()) != d)
      throw DataError("reduce_dim: vectors have differing dimensions");
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = vs[i][j];
  }
  return m;
}

}  // namespace

Vectors pca(const Vectors& vectors, std::size_t target_dim) {
  if (vectors.empty()) throw DataError("pca: no vectors");
  Eigen::MatrixXd x = to_matrix(vectors);
  x.rowwise() -= x.colwise().mean();
  const Eigen::Index n = x.rows(), d = x.cols();

  // Eigen-decompose the smaller of the covariance and Gram matrices.
  Eigen::MatrixXd loadings;  // d x r
  Eigen::VectorXd values;    // r, descending
  if (d <= n) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x.transpose() * x);
    values = es.eigenvalues().reverse();
    loadings = es.eigenvectors().rowwise().reverse();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x * x.transpose());
    values = es.eigenvalues().reverse();
    const Eigen::MatrixXd u = es.eigenvectors().rowwise().reverse();
    loadings = Eigen::MatrixXd::Zero(d, u.cols());
    for (Eigen::Index c = 0; c < u.cols(); ++c)
      if (values(c) > 0) loadings.col(c) = x.transpose() * u.col(c) / std::sqrt(values(c));
  }
  const double top = values.size() ? std::max(values(0), 0.0) : 0.0;

  Vectors out(vectors.size(), Vector(target_dim, 0.0));
  for (std::size_t c = 0; c < target_dim && static_cast<Eigen::Index>(c) < values.size(); ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    if (!(values(ci) > 1e-12 * top) || top == 0) break;
    Eigen::VectorXd axis = loadings.col(ci);
    Eigen::Index arg = 0;
    axis.cwiseAbs().maxCoeff(&arg);
    if (axis(arg) < 0) axis = -axis;
    const Eigen::VectorXd scores = x * axis;
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)][c] = scores(i);
  }
  return out;
}

std::pair<double, double> fit_ab(double min_dist, double spread) {
  constexpr int kPoints = 300;
  std::vector<double> xs(kPoints), ys(kPoints);
  for (int i = 0; i < kPoints; ++i) {
    xs[i] = 3.0 * spread * i / (kPoints - 1);
    ys[i] = xs[i] < min_dist ? 1.0 : std::exp(-(xs[i] - min_dist) / spread);
  }
  auto residuals = [&](double a, double b, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    r.resize(kPoints);
    if (jac) jac->resize(kPoints, 2);
    for (int i = 0; i < kPoints; ++i) {
      const double x = xs[i];
      const double u = x > 0 ? std::pow(x, 2 * b) : 0.0;
      const double den = 1 + a * u;
      r(i) = 1 / den - ys[i];
      if (jac) {
        (*jac)(i, 0) = -u / (den * den);
        (*jac)(i, 1) = x > 0 ? -a * u * 2 * std::log(x) / (den * den) : 0.0;
      }
    }
  };
  double a = 1, b = 1, lambda = 1e-3;
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residuals(a, b, r, &jac);
  double cost = r.squaredNorm();
  for (int it = 0; it < 500; ++it) {
    const Eigen::Matrix2d jtj = jac.transpose() * jac;
    const Eigen::Vector2d g = jac.transpose() * r;
    Eigen::Matrix2d lhs = jtj;
    lhs.diagonal() += lambda * jtj.diagonal();
    const Eigen::Vector2d step = lhs.ldlt().solve(-g);
    const double na = a + step(0), nb = b + step(1);
    Eigen::VectorXd nr;
    if (na > 0 && nb > 0) {
      residuals(na, nb, nr, nullptr);
      const double ncost = nr.squaredNorm();
      if (ncost < cost) {
        const double improvement = cost - ncost;
        a = na;
        b = nb;
        cost = ncost;
        residuals(a, b, r, &jac);
        lambda = std::max(lambda / 10, 1e-12);
        if (improvement < 1e-15 * std::max(cost, 1e-300) || step.norm() < 1e-12) break;
        continue;
      }
    }
    lambda *= 10;
    if (lambda > 1e12) break;
  }
  return {a, b};
}

namespace {

Vectors umap(const Vectors& vectors, const ReducerParams& p, std::uint64_t seed) {
  const std::size_t n = vectors.size();
  const std::size_t dim = p.target_dim;
  const std::size_t k = std::max<std::size_t>(1, std::min(p.n_neighbors, n - 1));

  // Exact k nearest neighbours.
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0;
      for (std::size_t c = 0; c < vectors[i].size(); ++c) {
        const double d = vectors[i][c] - vectors[j][c];
        s += d * d;
      }
      dist[i][j] = dist[j][i] = std::sqrt(s);
    }
  std::vector<std::vector<std::size_t>> knn(n);
  double mean_dist = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return dist[i][a] != dist[i][b] ? dist[i][a] < dist[i][b] : a < b;
                      });
    order.resize(k);
    knn[i] = std::move(order);
    for (auto j : knn[i]) mean_dist += dist[i][j];
  }
  mean_dist /= static_cast<double>(n * k);

  // Fuzzy simplicial set.
  const double target = std::log2(static_cast<double>(k));
  std::map<std::pair<std::size_t, std::size_t>, double> w;
  for (std::size_t i = 0; i < n; ++i) {
    double rho = 0;
    for (auto j : knn[i])
      if (dist[i][j] > 0) {
        rho = dist[i][j];
        break;
      }
    double lo = 0, hi = std::numeric_limits<double>::infinity(), sigma = 1;
    for (int it = 0; it < 64; ++it) {
      double psum = 0;
      for (auto j : knn[i]) psum += std::exp(-std::max(0.0, dist[i][j] - rho) / sigma);
      if (std::abs(psum - target) < 1e-5) break;
      if (psum > target) {
        hi = sigma;
        sigma = (lo + hi) / 2;
      } else {
        lo = sigma;
        sigma = std::isinf(hi) ? sigma * 2 : (lo + hi) / 2;
      }
    }
    sigma = std::max(sigma, 1e-3 * mean_dist);
    if (sigma <= 0) sigma = 1e-3;
    for (auto j : knn[i]) w[{i, j}] = std::exp(-std::max(0.0, dist[i][j] - rho) / sigma);
  }
  struct Edge {
    std::size_t head, tail;
    double weight;
  };
  std::vector<Edge> edges;
  for (const auto& [key, wij] : w) {
    const auto [i, j] = key;
    const auto rev = w.find({j, i});
    const double wji = rev == w.end() ? 0.0 : rev->second;
    const double sym = wij + wji - wij * wji;
    edges.push_back({i, j, sym});
    if (rev == w.end()) edges.push_back({j, i, sym});
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.head != b.head ? a.head < b.head : a.tail < b.tail;
  });
  double max_w = 0;
  for (const auto& e : edges) max_w = std::max(max_w, e.weight);
  const auto n_epochs = static_cast<double>(p.n_epochs);
  std::erase_if(edges, [&](const Edge& e) { return e.weight < max_w / n_epochs || e.weight <= 0; });

  // Initialisation: PCA scaled to [0, 10] plus seeded jitter.
  std::mt19937_64 rng(seed);
  Vectors y = pca(vectors, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& row : y) {
      lo = std::min(lo, row[c]);
      hi = std::max(hi, row[c]);
    }
    for (auto& row : y) row[c] = hi > lo ? 10.0 * (row[c] - lo) / (hi - lo) : 0.0;
  }
  std::normal_distribution<double> jitter(0.0, 1e-4);
  for (auto& row : y)
    for (double& v : row) v += jitter(rng);

  const auto [a, b] = fit_ab(p.min_dist);
  constexpr double kNegativeRate = 5.0;
  std::vector<double> eps(edges.size()), next(edges.size()), eps_neg(edges.size()), next_neg(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    eps[e] = max_w / edges[e].weight;
    next[e] = eps[e];
    eps_neg[e] = eps[e] / kNegativeRate;
    next_neg[e] = eps_neg[e];
  }
  auto clip = [](double v) { return std::clamp(v, -4.0, 4.0); };

  for (std::size_t epoch = 0; epoch < p.n_epochs; ++epoch) {
    const double alpha = 1.0 - static_cast<double>(epoch) / n_epochs;
    const auto ep = static_cast<double>(epoch);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (next[e] > ep) continue;
      auto& yj = y[edges[e].head];
      auto& yk = y[edges[e].tail];
      double d2 = 0;
      for (std::size_t c = 0; c < dim; ++c) d2 += (yj[c] - yk[c]) * (yj[c] - yk[c]);
      if (d2 > 0) {
        const double coeff = -2.0 * a * b * std::pow(d2, b - 1.0) / (a * std::pow(d2, b) + 1.0);
        for (std::size_t c = 0; c < dim; ++c) {
          const double g = clip(coeff * (yj[c] - yk[c]));
          yj[c] += g * alpha;
          yk[c] -= g * alpha;
        }
      }
      next[e] += eps[e];

      const auto n_neg = static_cast<std::size_t>((ep - next_neg[e]) / eps_neg[e]);
      for (std::size_t s = 0; s < n_neg; ++s) {
        const std::size_t other = rng() % n;
        if (other == edges[e].head) continue;
        const auto& yo = y[other];
        double dn = 0;
        for (std::size_t c = 0; c < dim; ++c) dn += (yj[c] - yo[c]) * (yj[c] - yo[c]);
        const double coeff = dn > 0 ? 2.0 * b / ((0.001 + dn) * (a * std::pow(dn, b) + 1.0)) : 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
          const double g = coeff > 0 ? clip(coeff * (yj[c] - yo[c])) : 0.0;
          yj[c] += g * alpha;
        }
      }
      next_neg[e] += static_cast<double>(n_neg) * eps_neg[e];
    }
  }
  return y;
}

}  // namespace

Vectors reduce_dim(const Vectors& vectors, const ReducerParams& params, std::uint64_t seed) {
  if (params.target_dim == 0) throw ConfigError("reduce_dim: target_dim must be positive");
  if (vectors.size() < params.target_dim + 1)
    throw DataError(fmt::format("reduce_dim: {} vectors, need at least {}", vectors.size(),
                                params.target_dim + 1));
  switch (params.kind) {
    case ReducerKind::identity:
      for (const auto& v : vectors)
        if (v.size() != params.target_dim)
          throw ConfigError(fmt::format("identity reducer: input dimension {} differs from {}",
                                        v.size(), params.target_dim));
      return vectors;
    case ReducerKind::pca: return pca(vectors, params.target_dim);
    case ReducerKind::umap: return umap(vectors, params, seed);
  }
  throw ConfigError("unknown reducer");
}

}  // namespace modlab::discovery

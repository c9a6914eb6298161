#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "modlab/discovery/clustering.hpp"
#include "modlab/error.hpp"

using namespace modlab;
using namespace modlab::discovery;

TEST_CASE("adjusted Rand index oracle on hand cases") {
  CHECK(testing::adjusted_rand_index({0, 0, 1, 1}, {1, 1, 0, 0}) == doctest::Approx(1.0));
  CHECK(testing::adjusted_rand_index({0, 0, 1, 1}, {0, 1, 0, 1}) == doctest::Approx(-0.5));
}

TEST_CASE("k-means separates far blobs for every seed") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> noise(0.0, 1.0);
  Vectors v;
  std::vector<std::size_t> truth;
  for (std::size_t b = 0; b < 2; ++b)
    for (int i = 0; i < 60; ++i) {
      v.push_back({noise(rng) + 10.0 * static_cast<double>(b), noise(rng), noise(rng)});
      truth.push_back(b);
    }
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = cluster_kmeans(v, 2, seed);
    CHECK(testing::adjusted_rand_index(r.assignments, truth) == doctest::Approx(1.0));
    CHECK(r.iterations <= 300);
  }
  const auto a = cluster_kmeans(v, 3, 5), b = cluster_kmeans(v, 3, 5);
  CHECK(a.assignments == b.assignments);
  CHECK(a.centroids == b.centroids);
}

TEST_CASE("k = 1 yields the mean; duplicating the data keeps the centroids") {
  const Vectors v = {{0, 0}, {2, 0}, {4, 6}, {10, 10}, {11, 9}};
  const auto one = cluster_kmeans(v, 1, 3);
  CHECK(one.centroids[0][0] == doctest::Approx(5.4));
  CHECK(one.centroids[0][1] == doctest::Approx(5.0));

  Vectors twice = v;
  twice.insert(twice.end(), v.begin(), v.end());
  const auto a = cluster_kmeans(v, 2, 1), b = cluster_kmeans(twice, 2, 1);
  auto sorted = [](Vectors c) {
    std::sort(c.begin(), c.end());
    return c;
  };
  const auto ca = sorted(a.centroids), cb = sorted(b.centroids);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < 2; ++j) CHECK(ca[c][j] == doctest::Approx(cb[c][j]));
}

TEST_CASE("k-means argument errors") {
  const Vectors v = {{1, 1}, {1, 1}, {2, 2}};
  CHECK(count_distinct(v) == 2);
  CHECK_THROWS_AS(cluster_kmeans(v, 3, 0), DataError);
  CHECK_THROWS_AS(cluster_kmeans(v, 0, 0), ConfigError);
  CHECK_THROWS_AS(cluster_kmeans({}, 1, 0), DataError);
}

TEST_CASE("class-based TF-IDF ranks cluster-specific terms first") {
  const std::vector<std::vector<std::string>> docs = {{"a", "b"}, {"a"}, {"b", "c"}};
  const auto kw = class_tfidf_keywords(docs, {0, 0, 1}, 2, 2);
  CHECK(kw[0] == std::vector<std::string>{"a", "b"});
  CHECK(kw[1] == std::vector<std::string>{"c", "b"});
  CHECK(class_tfidf_keywords(docs, {0, 0, 1}, 3, 5)[2].empty());
  CHECK_THROWS_AS(class_tfidf_keywords(docs, {0, 0}, 2, 5), DataError);
}

TEST_CASE("NPMI coherence") {
  SUBCASE("copies of one keyword list are fully coherent") {
    const std::vector<std::vector<std::string>> docs(6, {"share", "opinion", "view"});
    const auto c = score_coherence(docs, {{"share", "opinion", "view"}}, {6});
    REQUIRE(c.score);
    CHECK(*c.score == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("never co-occurring keywords score -1") {
    const auto c = score_coherence({{"x"}, {"y"}}, {{"x", "y"}}, {2});
    CHECK(*c.score == doctest::Approx(-1.0));
  }
  SUBCASE("hand-computed partial overlap") {
    // p(a) = p(b) = 3/4, p(a, b) = 1/2
    const NpmiTable t({{"a", "b"}, {"a"}, {"b"}, {"a", "b"}});
    const double expected = std::log(0.5 / 0.5625) / -std::log(0.5);
    CHECK(t.npmi("a", "b") == doctest::Approx(expected).epsilon(1e-12));
    CHECK(t.windows() == 4);
  }
  SUBCASE("sliding windows over long documents") {
    std::vector<std::string> doc;
    for (int i = 0; i < 12; ++i) doc.push_back("w" + std::to_string(i));
    const NpmiTable t({doc}, 10);
    CHECK(t.windows() == 3);
    CHECK(t.npmi("w0", "w11") == doctest::Approx(-1.0));
  }
  SUBCASE("single-keyword clusters are undefined; order of documents is irrelevant") {
    std::vector<std::vector<std::string>> docs = {{"a", "b"}, {"c"}, {"a", "c", "b"}, {"b"}};
    const auto c = score_coherence(docs, {{"a", "b"}, {"c"}}, {3, 1});
    CHECK_FALSE(c.per_cluster[1].has_value());
    std::reverse(docs.begin(), docs.end());
    CHECK(score_coherence(docs, {{"a", "b"}, {"c"}}, {3, 1}).score == c.score);
    CHECK_FALSE(score_coherence(docs, {{"a"}}, {4}).score.has_value());
  }
}

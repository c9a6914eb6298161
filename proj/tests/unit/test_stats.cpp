#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "modlab/analysis/stats.hpp"
#include "modlab/error.hpp"

using namespace modlab;
using namespace modlab::analysis;

namespace {

double boost_cdf(double t, double df) {
  return boost::math::cdf(boost::math::students_t_distribution<double>(df), t);
}

// Welch statistic computed directly from the textbook formulas.
TTest welch_oracle(const std::vector<double>& a, const std::vector<double>& b, int tails) {
  auto m = [](const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
  };
  auto var = [&](const std::vector<double>& x) {
    const double mu = m(x);
    double s = 0;
    for (double v : x) s += (v - mu) * (v - mu);
    return s / static_cast<double>(x.size() - 1);
  };
  const double va = var(a) / a.size(), vb = var(b) / b.size();
  TTest r;
  r.t = (m(a) - m(b)) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) / (va * va / (a.size() - 1) + vb * vb / (b.size() - 1));
  const double upper = 1.0 - boost_cdf(r.t, r.df);
  r.p = tails == 2 ? 2.0 * std::min(upper, 1.0 - upper) : upper;
  return r;
}

}  // namespace

TEST_CASE("incomplete beta agrees with boost") {
  for (double a : {0.5, 1.0, 2.5, 10.0, 40.0})
    for (double b : {0.5, 1.0, 3.0, 25.0})
      for (double x : {0.0, 0.01, 0.2, 0.5, 0.77, 0.99, 1.0})
        CHECK(regularized_incomplete_beta(a, b, x) == doctest::Approx(boost::math::ibeta(a, b, x)).epsilon(1e-10));
}

TEST_CASE("student t cdf agrees with boost") {
  for (double df : {1.0, 2.0, 3.5, 8.0, 30.0, 250.0})
    for (double t : {-12.0, -3.0, -1.0, -0.1, 0.0, 0.4, 2.0, 7.0})
      CHECK(student_t_cdf(t, df) == doctest::Approx(boost_cdf(t, df)).epsilon(1e-10));
  CHECK(student_t_cdf(0.0, 5.0) == 0.5);
}

TEST_CASE("welch t-test against the direct formula") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0, 1);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> a(3 + rng() % 20), b(3 + rng() % 20);
    const double sa = 0.5 + (rng() % 10) * 0.3, shift = (rng() % 7) * 0.2;
    for (auto& x : a) x = shift + sa * n(rng);
    for (auto& x : b) x = n(rng);
    for (int tails : {1, 2}) {
      const TTest got = welch_t(a, b, tails);
      const TTest want = welch_oracle(a, b, tails);
      CHECK(got.t == doctest::Approx(want.t).epsilon(1e-12));
      CHECK(got.df == doctest::Approx(want.df).epsilon(1e-12));
      CHECK(got.p == doctest::Approx(want.p).epsilon(1e-9));
    }
    // Swapping the samples flips t and keeps the two-tailed p.
    const TTest ab = welch_t(a, b, 2), ba = welch_t(b, a, 2);
    CHECK(ba.t == doctest::Approx(-ab.t));
    CHECK(ba.p == doctest::Approx(ab.p));
  }
}

TEST_CASE("t of minus one on eight degrees of freedom") {
  // Equal variances 2.5 and n = 5, so SE = 1 and df = 8.
  const std::vector<double> a = {1, 2, 3, 4, 5}, b = {2, 3, 4, 5, 6};
  const TTest r = welch_t(a, b, 2);
  CHECK(r.t == doctest::Approx(-1.0));
  CHECK(r.df == doctest::Approx(8.0));
  CHECK(std::abs(r.p - 0.3466) < 5e-4);
}

TEST_CASE("zero statistic gives p of exactly one or one half") {
  const std::vector<double> a = {1, 2, 3, 4}, b = {4, 3, 2, 1, 2.5, 2.5};
  CHECK(welch_t(a, b, 2).p == 1.0);
  CHECK(welch_t(a, b, 1).p == 0.5);
  CHECK(welch_t(a, b, 2, Variance::pooled).p == 1.0);
}

TEST_CASE("pooled variance uses n_a + n_b - 2 degrees of freedom") {
  const std::vector<double> a = {1, 3, 5, 9}, b = {2, 2, 3, 4, 8, 1};
  const TTest r = welch_t(a, b, 2, Variance::pooled);
  CHECK(r.df == 8.0);
  const double sp2 = (3 * sample_variance(a) + 5 * sample_variance(b)) / 8.0;
  CHECK(r.t == doctest::Approx((mean(a) - mean(b)) / std::sqrt(sp2 * (1.0 / 4 + 1.0 / 6))));
}

TEST_CASE("welch input errors") {
  CHECK_THROWS_AS(welch_t({1}, {1, 2}, 2), DataError);
  CHECK_THROWS_AS(welch_t({1, 1}, {2, 2}, 2), DataError);
  CHECK_THROWS_AS(welch_t({1, 2}, {2, 3}, 3), ConfigError);
}

TEST_CASE("a two sigma shift at n = 100 is detected") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> a(100), b(100);
  for (auto& x : a) x = 2.0 + n(rng);
  for (auto& x : b) x = n(rng);
  CHECK(welch_t(a, b, 2).p < 0.001);
}

TEST_CASE("krippendorff alpha") {
  using R = RatingMatrix;
  SUBCASE("perfect agreement") {
    const R r = {{"a", "a"}, {"b", "b"}, {"c", "c", "c"}, {"a", std::nullopt, "a"}};
    CHECK(krippendorff_alpha(r) == 1.0);
  }
  SUBCASE("hand-computed two raters") {
    // Units (a,a) (a,b) (b,b) (b,b): coincidences o_aa = 2, o_ab = o_ba = 1,
    // o_bb = 4; n_a = 3, n_b = 5, n = 8.
    // D_o = 2 / 8, D_e = 2 * 3 * 5 / (8 * 7), alpha = 1 - D_o / D_e = 1 - 7 / 15.
    const R r = {{"a", "a"}, {"a", "b"}, {"b", "b"}, {"b", "b"}};
    CHECK(std::abs(krippendorff_alpha(r) - (1.0 - 7.0 / 15.0)) < 1e-9);
  }
  SUBCASE("hand-computed with missing ratings and three raters") {
    // Unit 1 (a,a,b): o_aa += 2/2, o_ab += 2/2, o_ba += 2/2. Unit 2 (b,b):
    // o_bb += 2. Unit 3 (a) is unpairable. n_a = 2, n_b = 3, n = 5.
    // D_o = 2 / 5, D_e = 2 * 6 / 20, alpha = 1 - (2/5) / (3/5) = 1 / 3.
    const R r = {{"a", "a", "b"}, {"b", std::nullopt, "b"}, {"a", std::nullopt, std::nullopt}};
    CHECK(std::abs(krippendorff_alpha(r) - 1.0 / 3.0) < 1e-9);
  }
  SUBCASE("independent uniform ratings are near zero") {
    std::mt19937_64 rng(3);
    R r(1000);
    for (auto& unit : r) unit = {std::string(1, 'a' + rng() % 5), std::string(1, 'a' + rng() % 5)};
    CHECK(std::abs(krippendorff_alpha(r)) < 0.05);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(krippendorff_alpha({{"a", "b"}}), DataError);
    CHECK_THROWS_AS(krippendorff_alpha({{"a", "a"}, {"a", "a"}}), DataError);
  }
}

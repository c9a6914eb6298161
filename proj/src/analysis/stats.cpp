#include "modlab/analysis/stats.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <map>

#include "modlab/error.hpp"

namespace modlab::analysis {

namespace {

constexpr double kEps = 1e-12;
constexpr double kTiny = 1e-300;

double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < kEps) return h;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw ConfigError("incomplete beta: shape parameters must be positive");
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * beta_continued_fraction(a, b, x) / a;
  return 1 - front * beta_continued_fraction(b, a, 1 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0)) throw ConfigError("t distribution: df must be positive");
  if (t == 0) return 0.5;
  const double tail = 0.5 * regularized_incomplete_beta(df / 2, 0.5, df / (df + t * t));
  return t > 0 ? 1 - tail : tail;
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw DataError("mean of an empty sample");
  double s = 0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw DataError("variance needs at least two values");
  const double m = mean(xs);
  double s = 0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

TTest welch_t(const std::vector<double>& a, const std::vector<double>& b, int tails, Variance variance) {
  if (tails != 1 && tails != 2) throw ConfigError("t-test: tails must be 1 or 2");
  if (a.size() < 2 || b.size() < 2)
    throw DataError(fmt::format("t-test needs at least two values per sample (got {} and {})", a.size(), b.size()));
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ma = mean(a), mb = mean(b);
  const double va = sample_variance(a), vb = sample_variance(b);

  TTest r;
  double se2 = 0;
  if (variance == Variance::welch) {
    se2 = va / na + vb / nb;
    if (se2 > 0) {
      const double qa = va / na, qb = vb / nb;
      r.df = se2 * se2 / (qa * qa / (na - 1) + qb * qb / (nb - 1));
    }
  } else {
    r.df = na + nb - 2;
    const double pooled = ((na - 1) * va + (nb - 1) * vb) / r.df;
    se2 = pooled * (1 / na + 1 / nb);
  }
  if (!(se2 > 0))
    throw DataError("t-test: both samples have zero variance, the statistic is undefined");
  r.t = (ma - mb) / std::sqrt(se2);
  if (r.t == 0) {
    r.p = tails == 2 ? 1.0 : 0.5;
    return r;
  }
  if (tails == 1)
    r.p = student_t_cdf(-r.t, r.df);  // P(T >= t)
  else
    r.p = std::min(1.0, 2 * student_t_cdf(-std::fabs(r.t), r.df));
  return r;
}

double krippendorff_alpha(const RatingMatrix& ratings) {
  std::map<std::string, std::map<std::string, double>> o;
  std::size_t pairable = 0;
  for (const auto& unit : ratings) {
    std::vector<const std::string*> values;
    for (const auto& r : unit)
      if (r) values.push_back(&*r);
    if (values.size() < 2) continue;
    ++pairable;
    const double w = 1.0 / static_cast<double>(values.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = 0; j < values.size(); ++j)
        if (i != j) o[*values[i]][*values[j]] += w;
  }
  if (pairable < 2)
    throw DataError(fmt::format("krippendorff alpha: {} pairable units, need at least 2", pairable));
  std::map<std::string, double> nc;
  double n = 0;
  for (const auto& [c, row] : o)
    for (const auto& [k, v] : row) {
      nc[c] += v;
      n += v;
    }
  double observed = 0, expected = 0;
  for (const auto& [c, row] : o)
    for (const auto& [k, v] : row)
      if (c != k) observed += v;
  for (const auto& [c, a] : nc)
    for (const auto& [k, b] : nc)
      if (c != k) expected += a * b;
  if (expected == 0)
    throw DataError("krippendorff alpha: a single category was used, expected disagreement is zero");
  return 1 - (n - 1) * observed / expected;
}

}  // namespace modlab::analysis

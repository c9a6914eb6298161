#pragma once

#include <optional>
#include <string>
#include <vector>

namespace modlab::analysis {

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

enum class Variance { welch, pooled };

struct TTest {
  double t = 0;
  double df = 0;
  double p = 1;
};

/// Two-sample t-test. `tails` is 1 (alternative: mean_a > mean_b) or 2.
/// Throws DataError when a sample has fewer than two values or the
/// standard error is zero; ConfigError on a bad `tails`.
TTest welch_t(const std::vector<double>& a, const std::vector<double>& b, int tails,
              Variance variance = Variance::welch);

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);

/// Units x raters; nullopt marks a missing rating.
using RatingMatrix = std::vector<std::vector<std::optional<std::string>>>;

/// Nominal Krippendorff's alpha from the coincidence matrix. Units with fewer
/// than two ratings are ignored. Throws DataError with fewer than two
/// pairable units or when expected disagreement is zero.
double krippendorff_alpha(const RatingMatrix& ratings);

}  // namespace modlab::analysis

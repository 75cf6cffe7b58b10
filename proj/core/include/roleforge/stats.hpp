#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace roleforge {

// I_x(a, b), continued-fraction evaluation. Throws ConfigError outside
// a > 0, b > 0, 0 <= x <= 1.
double regularized_incomplete_beta(double a, double b, double x);

// P(F > f) for an F(d1, d2) variable.
double f_upper_tail(double f, double d1, double d2);

// Two-sided P(|T| > |t|) for Student's t with `df` degrees of freedom.
double t_two_sided(double t, double df);

struct AnovaResult {
  double f = 0.0;
  std::size_t df_between = 0;
  std::size_t df_within = 0;
  double p = 1.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
};

// One-way ANOVA over arbitrary group labels. Throws ConfigError with fewer
// than 2 groups or n <= groups, DegenerateError when every group is constant.
AnovaResult one_way_anova(std::span<const double> values, std::span<const std::uint32_t> groups);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Welch's unequal-variance two-sample t-test, two-sided. Both samples need at
// least two values.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

// min(1, p * comparisons).
double bonferroni(double p, std::size_t comparisons);

struct PairwiseTests {
  std::vector<std::uint32_t> groups;  // distinct labels, ascending
  // Symmetric matrices indexed like `groups`; diagonal 1. NaN marks a pair
  // that was skipped because a group had fewer than two values.
  std::vector<std::vector<double>> raw;
  std::vector<std::vector<double>> adjusted;
  std::size_t comparisons = 0;
  std::size_t skipped = 0;
};

// Welch tests for every unordered pair of groups, Bonferroni-adjusted by the
// number of pairs.
PairwiseTests pairwise_t_bonferroni(std::span<const double> values, std::span<const std::uint32_t> groups);

// Text form of a p-value; anything below 1e-300 prints as "<1e-300".
std::string format_p(double p);

}  // namespace roleforge

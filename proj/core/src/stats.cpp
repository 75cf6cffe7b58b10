#include "roleforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "roleforge/error.hpp"

namespace roleforge {

namespace {

constexpr int kMaxIterations = 20000;
constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;

    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double step = d * c;
    h *= step;
    if (std::fabs(step - 1.0) < kEpsilon) return h;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !(x >= 0.0 && x <= 1.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw ConfigError(fmt::format("incomplete beta needs a > 0, b > 0, x in [0,1]; got ({}, {}, {})", a, b, x));
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_upper_tail(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw ConfigError("F distribution needs positive degrees of freedom");
  if (!(f > 0.0)) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

double t_two_sided(double t, double df) {
  if (!(df > 0.0)) throw ConfigError("t distribution needs positive degrees of freedom");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  return regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

namespace {

struct GroupIndex {
  std::vector<std::uint32_t> labels;
  std::vector<std::size_t> index;  // per value
};

GroupIndex index_groups(std::span<const double> values, std::span<const std::uint32_t> groups) {
  if (values.size() != groups.size()) {
    throw ConfigError(fmt::format("{} values but {} group labels", values.size(), groups.size()));
  }
  GroupIndex gi;
  gi.labels.assign(groups.begin(), groups.end());
  std::sort(gi.labels.begin(), gi.labels.end());
  gi.labels.erase(std::unique(gi.labels.begin(), gi.labels.end()), gi.labels.end());
  gi.index.resize(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    gi.index[i] = static_cast<std::size_t>(std::lower_bound(gi.labels.begin(), gi.labels.end(), groups[i]) -
                                           gi.labels.begin());
  }
  return gi;
}

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double ss = 0.0;  // sum of squared deviations
  bool constant = true;
};

Moments moments(std::span<const double> xs) {
  Moments m;
  m.n = xs.size();
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(m.n);
  for (double x : xs) {
    m.ss += (x - m.mean) * (x - m.mean);
    if (x != xs.front()) m.constant = false;
  }
  if (m.constant) m.ss = 0.0;
  return m;
}

}  // namespace

AnovaResult one_way_anova(std::span<const double> values, std::span<const std::uint32_t> groups) {
  const auto gi = index_groups(values, groups);
  const std::size_t k = gi.labels.size();
  const std::size_t n = values.size();
  if (k < 2) throw ConfigError("ANOVA needs at least two groups");
  if (n <= k) throw ConfigError(fmt::format("ANOVA needs more values ({}) than groups ({})", n, k));

  std::vector<std::vector<double>> by_group(k);
  for (std::size_t i = 0; i < n; ++i) by_group[gi.index[i]].push_back(values[i]);

  double grand = 0.0;
  for (double v : values) grand += v;
  grand /= static_cast<double>(n);

  AnovaResult res;
  bool all_constant = true;
  for (const auto& xs : by_group) {
    const auto m = moments(xs);
    res.ss_between += static_cast<double>(m.n) * (m.mean - grand) * (m.mean - grand);
    res.ss_within += m.ss;
    all_constant = all_constant && m.constant;
  }
  if (all_constant || !(res.ss_within > 0.0)) {
    throw DegenerateError("ANOVA undefined: zero within-group variance");
  }
  res.df_between = k - 1;
  res.df_within = n - k;
  res.f = (res.ss_between / static_cast<double>(res.df_between)) / (res.ss_within / static_cast<double>(res.df_within));
  res.p = f_upper_tail(res.f, static_cast<double>(res.df_between), static_cast<double>(res.df_within));
  return res;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ConfigError("Welch t-test needs at least two values per sample");
  const auto ma = moments(a);
  const auto mb = moments(b);
  const double na = static_cast<double>(ma.n);
  const double nb = static_cast<double>(mb.n);
  const double va = ma.ss / (na - 1.0) / na;
  const double vb = mb.ss / (nb - 1.0) / nb;
  const double se2 = va + vb;

  WelchResult res;
  if (se2 == 0.0) {
    res.df = na + nb - 2.0;
    if (ma.mean == mb.mean) {
      res.t = 0.0;
      res.p = 1.0;
    } else {
      res.t = ma.mean > mb.mean ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      res.p = 0.0;
    }
    return res;
  }
  res.t = (ma.mean - mb.mean) / std::sqrt(se2);
  res.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  res.p = t_two_sided(res.t, res.df);
  return res;
}

double bonferroni(double p, std::size_t comparisons) {
  return std::min(1.0, p * static_cast<double>(std::max<std::size_t>(comparisons, 1)));
}

PairwiseTests pairwise_t_bonferroni(std::span<const double> values, std::span<const std::uint32_t> groups) {
  const auto gi = index_groups(values, groups);
  const std::size_t k = gi.labels.size();
  std::vector<std::vector<double>> by_group(k);
  for (std::size_t i = 0; i < values.size(); ++i) by_group[gi.index[i]].push_back(values[i]);

  PairwiseTests out;
  out.groups = gi.labels;
  out.comparisons = k * (k - 1) / 2;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.raw.assign(k, std::vector<double>(k, nan));
  out.adjusted.assign(k, std::vector<double>(k, nan));
  for (std::size_t i = 0; i < k; ++i) {
    out.raw[i][i] = 1.0;
    out.adjusted[i][i] = 1.0;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (by_group[i].size() < 2 || by_group[j].size() < 2) {
        ++out.skipped;
        continue;
      }
      const double p = welch_t_test(by_group[i], by_group[j]).p;
      out.raw[i][j] = out.raw[j][i] = p;
      out.adjusted[i][j] = out.adjusted[j][i] = bonferroni(p, out.comparisons);
    }
  }
  return out;
}

std::string format_p(double p) {
  if (std::isnan(p)) return "NA";
  if (p < 1e-300) return "<1e-300";
  return fmt::format("{:.6g}", p);
}

}  // namespace roleforge

#include <doctest.h>

#include <cmath>
#include <random>

#include "ks.hpp"
#include "roleforge/error.hpp"
#include "roleforge/stats.hpp"

using namespace roleforge;

TEST_CASE("incomplete beta") {
  CHECK(regularized_incomplete_beta(2, 3, 0) == 0.0);
  CHECK(regularized_incomplete_beta(2, 3, 1) == 1.0);
  for (double x : {0.1, 0.25, 0.5, 0.9}) CHECK(std::abs(regularized_incomplete_beta(1, 1, x) - x) <= 1e-14);
  CHECK(std::abs(regularized_incomplete_beta(2, 2, 0.5) - 0.5) <= 1e-14);
  // Values from an independent numerical library.
  CHECK(std::abs(regularized_incomplete_beta(2.5, 3.5, 0.3) - 0.29675298929566646) <= 1e-12);
  CHECK(std::abs(regularized_incomplete_beta(0.5, 0.5, 0.9) - 0.7951672353008665) <= 1e-12);
  CHECK(std::abs(regularized_incomplete_beta(50, 40, 0.6) - 0.8011534179744886) <= 1e-10);
  for (double a : {0.3, 1.0, 4.5, 30.0}) {
    for (double b : {0.7, 2.0, 12.0}) {
      for (double x : {0.05, 0.4, 0.77, 0.99}) {
        CHECK(std::abs(regularized_incomplete_beta(a, b, x) + regularized_incomplete_beta(b, a, 1 - x) - 1) <= 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(regularized_incomplete_beta(0, 1, 0.5), ConfigError);
  CHECK_THROWS_AS(regularized_incomplete_beta(1, -1, 0.5), ConfigError);
  CHECK_THROWS_AS(regularized_incomplete_beta(1, 1, 1.5), ConfigError);
}

TEST_CASE("distribution tails") {
  CHECK(std::abs(f_upper_tail(3.2, 3, 20) - 0.045467229916248915) <= 1e-12);
  CHECK(f_upper_tail(0.0, 2, 5) == 1.0);
  CHECK(t_two_sided(0.0, 7) == 1.0);
  CHECK_THROWS_AS(f_upper_tail(1.0, 0, 5), ConfigError);
}

TEST_CASE("one-way ANOVA") {
  const std::vector<double> v{1, 2, 3, 4, 5, 6};
  const std::vector<std::uint32_t> g{0, 0, 0, 1, 1, 1};
  const auto res = one_way_anova(v, g);
  CHECK(res.ss_between == 13.5);
  CHECK(res.ss_within == 4.0);
  CHECK(res.f == 13.5);
  CHECK(res.df_between == 1);
  CHECK(res.df_within == 4);
  CHECK(std::abs(res.p - 0.0213) <= 1e-3);
  CHECK(std::abs(res.p - 0.02131164112875672) <= 1e-12);

  SUBCASE("no between-group difference") {
    const auto same = one_way_anova(std::vector<double>{1, 2, 3, 1, 2, 3}, g);
    CHECK(same.f == 0.0);
    CHECK(same.p == 1.0);
  }
  SUBCASE("translation and scale invariance") {
    std::vector<double> shifted, scaled;
    for (double x : v) {
      shifted.push_back(x + 1000.0);
      scaled.push_back(x * 7.5);
    }
    CHECK(one_way_anova(shifted, g).f == doctest::Approx(13.5).epsilon(1e-12));
    CHECK(one_way_anova(scaled, g).f == doctest::Approx(13.5).epsilon(1e-12));
  }
  SUBCASE("three unequal groups against a reference") {
    const std::vector<double> x{2.1, 3.4, 1.9, 5.0, 4.4, 6.1, 5.2, 7.7, 8.1, 6.9, 9.3, 8.8};
    const std::vector<std::uint32_t> labels{4, 4, 4, 4, 9, 9, 9, 2, 2, 2, 2, 2};
    const auto r = one_way_anova(x, labels);
    CHECK(r.f == doctest::Approx(23.48815923834697).epsilon(1e-12));
    CHECK(std::abs(r.p - 0.0002679611292029705) <= 1e-12);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(one_way_anova(std::vector<double>{1, 2, 3}, std::vector<std::uint32_t>{0, 0, 0}), ConfigError);
    CHECK_THROWS_AS(one_way_anova(std::vector<double>{1, 2}, std::vector<std::uint32_t>{0, 1}), ConfigError);
    CHECK_THROWS_AS(one_way_anova(std::vector<double>{1, 1, 2, 2}, std::vector<std::uint32_t>{0, 0, 1, 1}),
                    DegenerateError);
    CHECK_THROWS_AS(one_way_anova(std::vector<double>{1, 2}, std::vector<std::uint32_t>{0}), ConfigError);
  }
}

TEST_CASE("ANOVA p-values are uniform under the null") {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> ps;
  const std::vector<std::uint32_t> g{0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2};
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> v(g.size());
    for (auto& x : v) x = noise(rng);
    ps.push_back(one_way_anova(v, g).p);
  }
  CHECK(ks::p_value(ks::statistic_uniform(ps), ps.size()) > 0.01);
}

TEST_CASE("Welch t-test and Bonferroni") {
  const auto w = welch_t_test(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 4, 6, 8, 10});
  CHECK(w.t == doctest::Approx(-2.2514363231593695).epsilon(1e-12));
  CHECK(std::abs(w.p - 0.06913359319239236) <= 1e-10);

  const auto same = welch_t_test(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3});
  CHECK(same.p == 1.0);
  CHECK_THROWS_AS(welch_t_test(std::vector<double>{1}, std::vector<double>{1, 2}), ConfigError);

  CHECK(bonferroni(0.02, 3) == doctest::Approx(0.06));
  CHECK(bonferroni(0.6, 3) == 1.0);
}

TEST_CASE("pairwise tests") {
  const std::vector<double> v{1, 2, 3, 1, 2, 3, 10, 11, 12, 40};
  const std::vector<std::uint32_t> g{0, 0, 0, 1, 1, 1, 2, 2, 2, 3};
  const auto pw = pairwise_t_bonferroni(v, g);
  CHECK(pw.comparisons == 6);
  CHECK(pw.skipped == 3);
  CHECK(pw.adjusted[0][1] == 1.0);
  CHECK(pw.raw[0][1] == 1.0);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(pw.adjusted[i][i] == 1.0);
    for (std::size_t j = 0; j < 4; ++j) {
      if (std::isnan(pw.raw[i][j])) continue;
      CHECK(pw.adjusted[i][j] == pw.adjusted[j][i]);
      CHECK(pw.adjusted[i][j] >= pw.raw[i][j]);
    }
  }
  CHECK(std::isnan(pw.adjusted[0][3]));
  CHECK(pw.adjusted[0][2] == doctest::Approx(std::min(1.0, 6 * pw.raw[0][2])));
}

TEST_CASE("p-value formatting") {
  CHECK(format_p(0.5) == "0.5");
  CHECK(format_p(1e-301) == "<1e-300");
  CHECK(format_p(0.0) == "<1e-300");
  CHECK(format_p(std::nan("")) == "NA");
}

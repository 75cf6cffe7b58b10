#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "generators.hpp"
#include "roleforge/clustering.hpp"
#include "roleforge/error.hpp"

using namespace roleforge;

namespace {

Matrix column(std::initializer_list<double> xs) {
  Matrix m(xs.size(), 1);
  std::size_t r = 0;
  for (double x : xs) m(r++, 0) = x;
  return m;
}

ClusteringResult fixed(const Matrix& data, std::vector<GroupId> assign, std::size_t k) {
  ClusteringResult res;
  res.k = k;
  res.assign = std::move(assign);
  res.centroids = Matrix(k, data.cols());
  std::vector<double> count(k, 0);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (std::size_t j = 0; j < data.cols(); ++j) res.centroids(res.assign[r], j) += data(r, j);
    count[res.assign[r]] += 1;
  }
  for (std::size_t g = 0; g < k; ++g) {
    for (std::size_t j = 0; j < data.cols(); ++j) res.centroids(g, j) /= count[g];
  }
  return res;
}

}  // namespace

TEST_CASE("standardize") {
  const auto s = standardize(column({1, 3}));
  CHECK(s(0, 0) == -1.0);
  CHECK(s(1, 0) == 1.0);

  Matrix m(3, 2);
  m(0, 0) = 4;
  m(1, 0) = 4;
  m(2, 0) = 4;
  m(0, 1) = 1;
  m(1, 1) = 5;
  m(2, 1) = 9;
  const auto z = standardize(m);
  for (std::size_t r = 0; r < 3; ++r) CHECK(z(r, 0) == 0.0);
  const auto again = standardize(z);
  for (std::size_t r = 0; r < 3; ++r) CHECK(std::abs(again(r, 1) - z(r, 1)) <= 1e-12);
}

TEST_CASE("kmeans small fixtures") {
  const auto pts = column({0, 1, 9, 10});
  SUBCASE("k = 2") {
    const auto res = kmeans(pts, 2);
    std::array<double, 2> c{res.centroids(0, 0), res.centroids(1, 0)};
    std::sort(c.begin(), c.end());
    CHECK(c[0] == 0.5);
    CHECK(c[1] == 9.5);
    CHECK(res.inertia == 1.0);
    CHECK(res.assign[0] == res.assign[1]);
    CHECK(res.assign[2] == res.assign[3]);
    CHECK(res.assign[0] != res.assign[2]);
  }
  SUBCASE("k = 1") {
    const auto res = kmeans(pts, 1);
    CHECK(res.centroids(0, 0) == 5.0);
    // Population variance 20.5 times n = 4.
    CHECK(res.inertia == doctest::Approx(82.0));
  }
  SUBCASE("k = n") {
    const auto res = kmeans(pts, 4);
    CHECK(res.inertia == 0.0);
    auto s = res.sizes();
    CHECK(std::all_of(s.begin(), s.end(), [](std::size_t x) { return x == 1; }));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(kmeans(pts, 5), ConfigError);
    CHECK_THROWS_AS(kmeans(pts, 0), ConfigError);
    KMeansConfig cfg;
    cfg.restarts = 0;
    CHECK_THROWS_AS(kmeans(pts, 2, cfg), ConfigError);
    CHECK_THROWS_AS(kmeans(column({1, 1, 1}), 2), DegenerateError);
  }
}

TEST_CASE("kmeans properties on blobs") {
  gen::Rng rng(17);
  for (std::size_t k = 2; k <= 6; ++k) {
    const auto b = gen::blobs(k, 40, 8, 0.8, 3.0, rng);
    KMeansConfig cfg;
    cfg.seed = k;
    const auto res = kmeans(b.points, k, cfg);
    for (std::size_t i = 1; i < res.inertia_trace.size(); ++i) {
      CHECK(res.inertia_trace[i] <= res.inertia_trace[i - 1] + 1e-9);
    }
    // Final assignment is a fixed point of the nearest-centroid rule.
    for (std::size_t r = 0; r < b.points.rows(); ++r) {
      double best = 1e300;
      GroupId arg = 0;
      for (std::size_t g = 0; g < k; ++g) {
        double d = 0;
        for (std::size_t j = 0; j < 8; ++j) d += std::pow(b.points(r, j) - res.centroids(g, j), 2);
        if (d < best) {
          best = d;
          arg = static_cast<GroupId>(g);
        }
      }
      CHECK(res.assign[r] == arg);
    }
    auto sizes = res.sizes();
    CHECK(std::all_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));

    // Permuting rows changes nothing but the group ids.
    std::vector<std::size_t> perm(b.points.rows());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix shuffled(b.points.rows(), 8);
    for (std::size_t i = 0; i < perm.size(); ++i) {
      std::copy_n(b.points.row(perm[i]).begin(), 8, shuffled.row(i).begin());
    }
    const auto other = kmeans(shuffled, k, cfg);
    CHECK(other.inertia == res.inertia);
    std::vector<GroupId> map(k, GroupId(-1));
    bool consistent = true;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      auto& m = map[res.assign[perm[i]]];
      if (m == GroupId(-1)) m = other.assign[i];
      consistent = consistent && m == other.assign[i];
    }
    CHECK(consistent);
  }
}

TEST_CASE("Davies-Bouldin") {
  SUBCASE("zero scatter") {
    const auto pts = column({0, 0, 2, 2});
    CHECK(davies_bouldin(pts, fixed(pts, {0, 0, 1, 1}, 2)) == 0.0);
  }
  SUBCASE("hand value") {
    const auto pts = column({0, 1, 9, 10});
    CHECK(std::abs(davies_bouldin(pts, fixed(pts, {0, 0, 1, 1}, 2)) - 1.0 / 9.0) <= 1e-12);
    const auto doubled = column({0, 1, 9, 10, 0, 1, 9, 10});
    CHECK(std::abs(davies_bouldin(doubled, fixed(doubled, {0, 0, 1, 1, 0, 0, 1, 1}, 2)) - 1.0 / 9.0) <= 1e-12);
  }
  SUBCASE("errors") {
    const auto pts = column({0, 1, 1, 0});
    CHECK_THROWS_AS(davies_bouldin(pts, fixed(pts, {0, 0, 0, 0}, 1)), UndefinedValueError);
    CHECK_THROWS_AS(davies_bouldin(pts, fixed(pts, {0, 0, 1, 1}, 2)), DegenerateError);
  }
}

TEST_CASE("select_k") {
  gen::Rng rng(8);
  for (std::size_t k : {2u, 6u}) {
    const auto b = gen::blobs(k, 100, 8, 0.1, 5.0, rng);
    const auto sel = select_k(b.points, 2, 10);
    CHECK(sel.best.k == k);
    CHECK(sel.scores.size() == 9);
  }
  const auto pts = column({0, 1, 9, 10});
  CHECK_THROWS_AS(select_k(pts, 1, 3), ConfigError);
  CHECK_THROWS_AS(select_k(pts, 3, 2), ConfigError);
  CHECK_THROWS_AS(select_k(pts, 2, 5), ConfigError);
}

TEST_CASE("groups ordered by size") {
  const auto pts = column({0, 10, 11, 12, 20, 21});
  const auto res = fixed(pts, {0, 1, 1, 1, 2, 2}, 3);
  const auto ordered = order_groups_by_size(res);
  CHECK(ordered.assign == std::vector<GroupId>{2, 0, 0, 0, 1, 1});
  CHECK(ordered.centroids(0, 0) == 11.0);
  CHECK(ordered.centroids(1, 0) == 20.5);
  CHECK(ordered.centroids(2, 0) == 0.0);
}

TEST_CASE("role labels for the published group means") {
  using Row = std::array<double, 8>;
  const Row g1{-0.12, -0.03, -0.55, -0.80, -0.09, -0.04, -0.12, -0.06};
  const Row g2{94.22, 311.27, 7.18, 88.40, 113.87, 283.79, 112.79, 285.57};
  const Row g3{5.52, 1.40, 5.60, 3.10, 5.28, 1.43, 6.76, 2.34};
  const Row g4{-0.04, 0.00, -0.37, 0.69, -0.07, 0.00, -0.10, -0.01};
  const Row g5{-0.03, -0.01, 0.60, 0.19, -0.03, -0.02, -0.04, -0.02};
  const Row g6{0.48, 0.12, 1.96, 1.70, 0.35, 0.12, 0.53, 0.19};
  CHECK(label_role(g1) == "non-pivot ultra-périphérique");
  CHECK(label_role(g2) == "pivot orphelin");
  CHECK(label_role(g3) == "pivot connecteur");
  CHECK(label_role(g4) == "non-pivot périphérique (entrant)");
  CHECK(label_role(g5) == "non-pivot périphérique (sortant)");
  CHECK(label_role(g6) == "non-pivot connecteur");

  const Row provincial{2.0, 0.5, -0.3, -0.2, -0.4, -0.1, -0.2, -0.1};
  CHECK(label_role(provincial) == "pivot provincial");
  CHECK_THROWS_AS(label_role(std::vector<double>{1.0, 2.0}), ConfigError);
}

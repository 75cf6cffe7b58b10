#include <doctest.h>

#include <numeric>

#include "generators.hpp"
#include "oracle.hpp"
#include "roleforge/capitalists.hpp"
#include "roleforge/error.hpp"

using namespace roleforge;

namespace {

// Node 0 with the given followers and followees among nodes 1..n-1.
DirectedGraph ego(std::size_t n, const std::vector<NodeId>& followers, const std::vector<NodeId>& followees) {
  std::vector<Arc> arcs;
  for (auto v : followers) arcs.push_back({v, 0});
  for (auto v : followees) arcs.push_back({0, v});
  return DirectedGraph::from_arcs(n, std::move(arcs));
}

std::vector<NodeId> range(NodeId from, NodeId to) {
  std::vector<NodeId> out(to - from);
  std::iota(out.begin(), out.end(), from);
  return out;
}

}  // namespace

TEST_CASE("overlap index") {
  CHECK(overlap_index(ego(7, {1, 2, 3, 4}, {2, 3, 4, 5, 6}), 0) == 0.75);
  CHECK(overlap_index(ego(4, {1, 2}, {1, 2}), 0) == 1.0);
  CHECK(overlap_index(ego(5, {1, 2}, {3, 4}), 0) == 0.0);
  CHECK(overlap_index(ego(3, {1, 2}, {}), 0) == 0.0);
  CHECK(overlap_index(ego(3, {}, {}), 0) == 0.0);
}

TEST_CASE("ratio") {
  CHECK(ratio(ego(5, {1, 2}, {3, 4}), 0) == 1.0);
  CHECK(ratio(ego(1701, range(1, 1001), range(1001, 1701)), 0) == 0.7);
  CHECK(ratio(ego(6, {1, 2, 3, 4, 5}, {}), 0) == 0.0);
  CHECK_THROWS_AS(ratio(ego(3, {}, {1, 2}), 0), UndefinedValueError);
}

TEST_CASE("classification") {
  CHECK(classify_record(5000, 1.3) == Classification{DegreeBand::Low, Behavior::Ifyfm});
  CHECK(classify_record(20000, 0.5) == Classification{DegreeBand::High, Behavior::Passive});
  CHECK(classify_record(20000, 0.85) == Classification{DegreeBand::High, Behavior::Fmify});
  CHECK(classify_record(600, 0.2) == Classification{DegreeBand::Low, Behavior::Fmify});
  CHECK(classify_record(std::size_t{20000}, std::size_t{14000}) == Classification{DegreeBand::High, Behavior::Fmify});
  CHECK_THROWS_AS(classify_record(499, 1.0), ConfigError);
  CHECK_THROWS_AS(classify_record(600, -0.1), ConfigError);

  // Every (k_in, ratio) maps somewhere consistent with the band rules.
  for (std::size_t k_in : {500u, 700u, 10000u, 10001u, 50000u}) {
    for (double r : {0.0, 0.3, 0.69999, 0.7, 0.9, 0.99999, 1.0, 2.0}) {
      const auto c = classify_record(k_in, r);
      CHECK((c.band == DegreeBand::Low) == (k_in <= 10000));
      if (c.band == DegreeBand::Low) CHECK(c.behavior != Behavior::Passive);
      CHECK((c.behavior == Behavior::Ifyfm) == (r >= 1.0));
    }
  }
}

TEST_CASE("detection thresholds") {
  // 600 reciprocal partners: detected with overlap 1.
  const auto big = ego(601, range(1, 601), range(1, 601));
  const auto found = detect_capitalists(big);
  REQUIRE(found.size() == 1);
  CHECK(found[0].node == 0);
  CHECK(found[0].overlap == 1.0);
  CHECK(found[0].band == DegreeBand::Low);
  CHECK(found[0].behavior == Behavior::Ifyfm);

  // In-degree 499 misses the floor.
  CHECK(detect_capitalists(ego(500, range(1, 500), range(1, 500))).empty());

  CapitalistConfig bad;
  bad.overlap_min = 1.5;
  CHECK_THROWS_AS(detect_capitalists(big, bad), ConfigError);
}

TEST_CASE("detection on a planted graph") {
  gen::Rng rng(4);
  const auto planted = gen::capitalist_graph(3000, 12, rng);
  const auto g = gen::to_graph(planted.n, planted.arcs);
  const auto found = detect_capitalists(g);
  std::vector<std::uint32_t> nodes;
  for (const auto& r : found) nodes.push_back(r.node);
  std::sort(nodes.begin(), nodes.end());
  CHECK(nodes == planted.planted);
  for (std::size_t i = 1; i < found.size(); ++i) CHECK(found[i - 1].k_in >= found[i].k_in);

  // Monotone in both thresholds.
  CapitalistConfig strict;
  strict.overlap_min = 0.97;
  strict.in_degree_min = 900;
  CHECK(detect_capitalists(g, strict).size() <= found.size());
}

TEST_CASE("overlap agrees with the oracle and is transpose-invariant") {
  gen::Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 40 + trial * 10;
    const auto arcs = gen::random_arcs(n, 0.1, rng);
    const auto g = gen::to_graph(n, arcs);
    const auto t = g.transpose();
    const auto d = oracle::Dense::simple(n, arcs);
    for (NodeId u = 0; u < n; ++u) {
      CHECK(overlap_index(g, u) == doctest::Approx(oracle::overlap(d, u)).epsilon(1e-12));
      CHECK(overlap_index(t, u) == overlap_index(g, u));
      if (g.in_degree(u) > 0) CHECK(ratio(g, u) == doctest::Approx(oracle::ratio(d, u)).epsilon(1e-12));
    }
  }
}

TEST_CASE("cross-tabulation") {
  // 10 low-band FMIFY capitalists split 7/3 across groups of 70 and 30 nodes.
  std::vector<CapitalistRecord> records;
  std::vector<std::optional<GroupId>> group(100);
  for (std::size_t u = 0; u < 100; ++u) group[u] = u < 70 ? 0 : 1;
  for (NodeId u : {0u, 1u, 2u, 3u, 4u, 5u, 6u, 70u, 71u, 72u}) {
    CapitalistRecord r;
    r.node = u;
    r.k_in = 600;
    r.k_out = 300;
    r.ratio = 0.5;
    records.push_back(r);
  }
  const auto tab = crosstab(records, group, 2);
  CHECK(tab.group_sizes == std::vector<std::size_t>{70, 30});
  const auto& row = tab.slices[0];
  CHECK(row.total == 10);
  CHECK(row.share_of_capitalists == std::vector<double>{70.0, 30.0});
  CHECK(row.share_of_group[0] == doctest::Approx(10.0));
  CHECK(row.share_of_group[1] == doctest::Approx(10.0));
  // An empty slice is a row of zeros.
  CHECK(tab.slices[4].total == 0);
  CHECK(tab.slices[4].share_of_capitalists == std::vector<double>{0.0, 0.0});

  // Capitalists outside the clustering are left out of the table.
  group[72].reset();
  CHECK(crosstab(records, group, 2).slices[0].total == 9);
  group.resize(50);
  CHECK_THROWS_AS(crosstab(records, group, 2), ConfigError);
}

TEST_CASE("band and behavior names") {
  CHECK(parse_band(to_string(DegreeBand::High)) == DegreeBand::High);
  CHECK(parse_behavior(to_string(Behavior::Passive)) == Behavior::Passive);
  CHECK_FALSE(parse_behavior("lurker").has_value());
}

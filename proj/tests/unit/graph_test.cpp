#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "generators.hpp"
#include "roleforge/error.hpp"
#include "roleforge/graph.hpp"
#include "roleforge/partition.hpp"

using namespace roleforge;

TEST_CASE("edge list ingest") {
  SUBCASE("three arcs") {
    const auto g = parse_edge_list("0 1\n1 0\n1 2\n");
    CHECK(g.node_count() == 3);
    CHECK(g.arc_count() == 3);
    const auto out = g.out_neighbors(1);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == 0);
    CHECK(out[1] == 2);
  }
  SUBCASE("self-loop dropped") {
    const auto g = parse_edge_list("0 0\n");
    CHECK(g.node_count() == 1);
    CHECK(g.arc_count() == 0);
    CHECK(g.ingest_stats().self_loops_dropped == 1);
  }
  SUBCASE("duplicate dropped") {
    const auto g = parse_edge_list("0 1\n0 1\n");
    CHECK(g.arc_count() == 1);
    CHECK(g.ingest_stats().duplicates_dropped == 1);
  }
  SUBCASE("empty input is an empty graph") {
    const auto g = parse_edge_list("");
    CHECK(g.node_count() == 0);
    CHECK(g.arc_count() == 0);
  }
  SUBCASE("comments, blank lines, tabs and runs of spaces") {
    const auto g = parse_edge_list("# header\n% other\n\n  # indented\n5\t\t7\n7   5\n");
    CHECK(g.node_count() == 2);
    CHECK(g.arc_count() == 2);
  }
  SUBCASE("sparse ids are remapped in ascending order") {
    const auto g = parse_edge_list("900 12\n12 40\n");
    REQUIRE(g.node_count() == 3);
    CHECK(g.original_id(0) == 12);
    CHECK(g.original_id(1) == 40);
    CHECK(g.original_id(2) == 900);
    CHECK(g.dense_id(900) == NodeId{2});
    CHECK_FALSE(g.dense_id(13).has_value());
    CHECK(g.has_arc(2, 0));
  }
  SUBCASE("direction convention") {
    const auto a = parse_edge_list("0 1\n", EdgeConvention::SrcFollowsDst);
    const auto b = parse_edge_list("0 1\n", EdgeConvention::DstFollowsSrc);
    CHECK(a.has_arc(0, 1));
    CHECK(b.has_arc(1, 0));
    CHECK_FALSE(b.has_arc(0, 1));
  }
}

TEST_CASE("malformed lines report their line number") {
  auto line_of = [](std::string_view text) {
    try {
      parse_edge_list(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  CHECK(line_of("0 1\n1 x\n") == 2);
  CHECK(line_of("0 1\n\n# c\n1\n") == 4);
  CHECK(line_of("0 1 2\n") == 1);
  CHECK(line_of("-1 2\n") == 1);
}

TEST_CASE("missing edge list file") {
  CHECK_THROWS_AS(load_edge_list("/nonexistent/edges.txt"), ConfigError);
}

TEST_CASE("degrees") {
  const auto g = parse_edge_list("0 1\n1 0\n1 2\n");
  CHECK(degrees(g, 1) == Degrees{1, 2, 3});
  const auto single = parse_edge_list("0 1\n");
  CHECK(degrees(single, 0) == Degrees{0, 1, 1});
  const auto isolated = DirectedGraph::from_arcs(3, {{0, 1}});
  CHECK(degrees(isolated, 2) == Degrees{0, 0, 0});
  CHECK_THROWS_AS(degrees(isolated, 3), OutOfRangeError);
}

TEST_CASE("community link counts on the shared fixture") {
  const auto g = gen::to_graph(6, gen::g1_arcs());
  const auto p = gen::to_partition(gen::g1_labels());
  const auto out0 = community_link_counts(g, 0, p, Direction::Out);
  CHECK(out0 == std::map<CommunityId, std::size_t>{{0, 1}, {1, 1}});
  const auto out2 = community_link_counts(g, 2, p, Direction::Out);
  CHECK(out2.empty());
  const auto in2 = community_link_counts(g, 2, p, Direction::In);
  CHECK(in2 == std::map<CommunityId, std::size_t>{{0, 1}});

  const auto isolated = DirectedGraph::from_arcs(2, {});
  CHECK(community_link_counts(isolated, 0, Partition::whole(2), Direction::In).empty());
}

TEST_CASE("graph invariants on random graphs") {
  gen::Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + trial * 3;
    const auto g = gen::to_graph(n, gen::random_arcs(n, 0.15, rng));
    const auto labels = gen::random_labels(n, 3, rng);
    const auto p = gen::to_partition(labels);
    const auto t = g.transpose();
    std::size_t out_sum = 0, in_sum = 0;
    for (NodeId u = 0; u < n; ++u) {
      out_sum += g.out_degree(u);
      in_sum += g.in_degree(u);
      for (NodeId v : g.out_neighbors(u)) {
        const auto in = g.in_neighbors(v);
        CHECK(std::binary_search(in.begin(), in.end(), u));
      }
      CHECK(degrees(t, u).in == degrees(g, u).out);
      CHECK(degrees(t, u).out == degrees(g, u).in);
      for (auto dir : {Direction::In, Direction::Out}) {
        std::size_t sum = 0;
        for (auto [c, k] : community_link_counts(g, u, p, dir)) sum += k;
        CHECK(sum == (dir == Direction::In ? g.in_degree(u) : g.out_degree(u)));
      }
    }
    CHECK(out_sum == g.arc_count());
    CHECK(in_sum == g.arc_count());
  }
}

TEST_CASE("edge list round trip") {
  const auto g = parse_edge_list("10 20\n20 10\n20 30\n# x\n30 10\n99 10\n");
  const auto again = parse_edge_list(format_edge_list(g));
  CHECK(again == g);

  const auto path = std::filesystem::temp_directory_path() / "roleforge_roundtrip.txt";
  write_edge_list(g, path);
  CHECK(load_edge_list(path) == g);
  std::filesystem::remove(path);
}

TEST_CASE("weighted construction merges parallel arcs and keeps self-loops") {
  const auto g = DirectedGraph::from_weighted_arcs(2, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 1, 4.0}});
  CHECK(g.weighted());
  CHECK(g.has_self_loops());
  CHECK(g.arc_count() == 2);
  CHECK(g.total_weight() == doctest::Approx(7.0));
  CHECK(g.out_strength(0) == doctest::Approx(3.0));
  CHECK(g.self_loop_weight(1) == doctest::Approx(4.0));
  CHECK(g.in_strength(1) == doctest::Approx(7.0));
  CHECK_THROWS_AS(DirectedGraph::from_weighted_arcs(2, {{0, 1, -1.0}}), ConfigError);
  CHECK_THROWS_AS(DirectedGraph::from_arcs(2, {{0, 2}}), OutOfRangeError);
}

TEST_CASE("edge convention names") {
  CHECK(parse_edge_convention("src-follows-dst") == EdgeConvention::SrcFollowsDst);
  CHECK(parse_edge_convention("dst-follows-src") == EdgeConvention::DstFollowsSrc);
  CHECK_FALSE(parse_edge_convention("sideways").has_value());
  CHECK(to_string(EdgeConvention::DstFollowsSrc) == "dst-follows-src");
}

TEST_CASE("partition") {
  const std::vector<std::uint64_t> labels{7, 7, 3, 9, 3};
  const auto p = Partition::from_labels(std::span<const std::uint64_t>(labels));
  CHECK(p.community_count() == 3);
  CHECK(p.assignment() == std::vector<CommunityId>{0, 0, 1, 2, 1});
  CHECK(p.sizes() == std::vector<std::size_t>{2, 2, 1});
  CHECK_THROWS_AS(Partition({0, 2}, 3), ConfigError);
  CHECK_THROWS_AS(Partition({0, 3}, 3), ConfigError);
  CHECK_THROWS_AS(p.community_of(5), OutOfRangeError);
  CHECK_THROWS_AS(require_covers(p, DirectedGraph::from_arcs(4, {})), ConfigError);
}

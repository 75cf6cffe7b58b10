#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace roleforge {

using NodeId = std::uint32_t;
using OriginalId = std::uint64_t;
using CommunityId = std::uint32_t;

class Partition;

enum class Direction { In, Out };

// How a line "a b" of an edge list is read. Arc u->v always means u follows v.
enum class EdgeConvention {
  SrcFollowsDst,  // "a b" is a->b
  DstFollowsSrc,  // "a b" is b->a
};

struct Arc {
  NodeId src;
  NodeId dst;
};

struct WeightedArc {
  NodeId src;
  NodeId dst;
  double weight;
};

struct IngestStats {
  std::size_t lines_read = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

struct Degrees {
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t total = 0;

  friend bool operator==(const Degrees&, const Degrees&) = default;
};

// Immutable directed graph stored as two compressed adjacency arrays (out and
// in). Neighbor lists are sorted. Simple graphs carry no weight arrays; the
// weighted form is produced by community aggregation and may hold self-loops.
class DirectedGraph {
 public:
  DirectedGraph() = default;

  // Builds a simple graph over dense ids [0, n): self-loops and duplicate arcs
  // are dropped and counted in ingest_stats().
  static DirectedGraph from_arcs(std::size_t n, std::vector<Arc> arcs);

  // Builds a weighted graph. Parallel arcs are merged by summing weights and
  // self-loops are kept. Weights must be non-negative.
  static DirectedGraph from_weighted_arcs(std::size_t n, std::vector<WeightedArc> arcs);

  std::size_t node_count() const noexcept { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  std::size_t arc_count() const noexcept { return out_targets_.size(); }
  bool weighted() const noexcept { return !out_weights_.empty(); }
  bool has_self_loops() const noexcept { return self_loops_; }

  // Sum of arc weights (equals arc_count() for simple graphs).
  double total_weight() const noexcept { return total_weight_; }

  std::span<const NodeId> out_neighbors(NodeId u) const;
  std::span<const NodeId> in_neighbors(NodeId u) const;

  // Weights aligned with out_neighbors(u) / in_neighbors(u). Empty span for
  // simple graphs, where every arc weighs 1.
  std::span<const double> out_weights(NodeId u) const;
  std::span<const double> in_weights(NodeId u) const;

  double out_strength(NodeId u) const;
  double in_strength(NodeId u) const;
  double self_loop_weight(NodeId u) const;

  std::size_t out_degree(NodeId u) const { return out_neighbors(u).size(); }
  std::size_t in_degree(NodeId u) const { return in_neighbors(u).size(); }

  bool has_arc(NodeId u, NodeId v) const;

  // Reverses every arc. Original ids and ingest stats carry over.
  DirectedGraph transpose() const;

  // Original (file) id of a dense node; identity when no map was attached.
  OriginalId original_id(NodeId u) const;
  std::optional<NodeId> dense_id(OriginalId original) const;
  bool has_id_map() const noexcept { return !original_ids_.empty(); }

  // Attaches an ascending original-id map of size node_count().
  void set_original_ids(std::vector<OriginalId> ids);

  const IngestStats& ingest_stats() const noexcept { return stats_; }
  void set_ingest_stats(const IngestStats& stats) { stats_ = stats; }

  // Structural equality: adjacency, weights and id map. Ingest stats are
  // provenance and do not take part.
  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b);

 private:
  void check_node(NodeId u) const;

  std::vector<std::uint64_t> out_offsets_;
  std::vector<NodeId> out_targets_;
  std::vector<double> out_weights_;
  std::vector<std::uint64_t> in_offsets_;
  std::vector<NodeId> in_sources_;
  std::vector<double> in_weights_;
  std::vector<OriginalId> original_ids_;
  double total_weight_ = 0.0;
  bool self_loops_ = false;
  IngestStats stats_;
};

// Reads an edge list. Ids are remapped to dense [0, n) in ascending order of
// original id; every id seen on a data line becomes a node, even one whose
// only arc was a dropped self-loop.
DirectedGraph load_edge_list(const std::filesystem::path& path,
                             EdgeConvention convention = EdgeConvention::SrcFollowsDst);

// Same rules on in-memory text; `source` names the input in parse errors.
DirectedGraph parse_edge_list(std::string_view text,
                              EdgeConvention convention = EdgeConvention::SrcFollowsDst,
                              const std::string& source = "<memory>");

// Canonical form: one "src dst" line per arc in original ids, sorted by
// (src, dst), src-follows-dst convention.
void write_edge_list(const DirectedGraph& g, const std::filesystem::path& path);
std::string format_edge_list(const DirectedGraph& g);

Degrees degrees(const DirectedGraph& g, NodeId u);

// Arc counts from u in direction `dir`, keyed by the neighbor's community.
// Communities with no arc are absent.
std::map<CommunityId, std::size_t> community_link_counts(const DirectedGraph& g, NodeId u,
                                                         const Partition& p, Direction dir);

std::optional<EdgeConvention> parse_edge_convention(std::string_view text);
std::string_view to_string(EdgeConvention convention);

}  // namespace roleforge

#pragma once

#include <cstdint>
#include <vector>

#include "roleforge/graph.hpp"
#include "roleforge/partition.hpp"

namespace roleforge {

enum class SweepOrder { Natural, Shuffled };

struct LouvainConfig {
  // A move is accepted only if it raises modularity by more than this.
  double min_gain = 1e-9;
  std::uint64_t seed = 0;
  SweepOrder order = SweepOrder::Natural;
  // 0 runs levels until no node moves.
  std::size_t max_levels = 0;
};

struct LouvainTrace {
  // Modularity of the starting singleton partition followed by the value
  // after every local-move pass, across all levels.
  std::vector<double> pass_modularity;
  // Node-level (flattened) partition at the end of each level.
  std::vector<Partition> levels;
  std::size_t moves = 0;
};

struct LouvainResult {
  Partition partition;
  LouvainTrace trace;
  double modularity = 0.0;
};

// Leicht-Newman directed modularity with unit resolution:
//   Q = (1/m) sum_uv [A_uv - k_u^out k_v^in / m] delta(c_u, c_v)
// over arc weights. Self-loops (aggregated graphs) count once in A and once
// in each of the out/in strengths. Throws UndefinedValueError when m = 0.
double directed_modularity(const DirectedGraph& g, const Partition& p);

// One node per community; arc C_i -> C_j carries the total weight of arcs
// from C_i to C_j and internal weight becomes a self-loop.
DirectedGraph aggregate_graph(const DirectedGraph& g, const Partition& p);

// Greedy directed-modularity optimisation (local moves, then contraction,
// repeated). Deterministic for a given config. Throws UndefinedValueError
// when the graph has no arcs.
LouvainResult louvain_directed(const DirectedGraph& g, const LouvainConfig& cfg = {});

}  // namespace roleforge

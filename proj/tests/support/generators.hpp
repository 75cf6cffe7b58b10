#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "roleforge/graph.hpp"
#include "roleforge/matrix.hpp"
#include "roleforge/partition.hpp"

namespace gen {

using Rng = std::mt19937_64;

// Directed G(n, p) without self-loops.
oracle::ArcList random_arcs(std::size_t n, double p, Rng& rng);

// Labels in [0, k), every label used at least once (needs n >= k).
std::vector<std::size_t> random_labels(std::size_t n, std::size_t k, Rng& rng);

roleforge::DirectedGraph to_graph(std::size_t n, const oracle::ArcList& arcs);
roleforge::Partition to_partition(const std::vector<std::size_t>& labels);

oracle::ArcList two_cycles();

// Shared six-node fixture: communities {0,1,2} and {3,4,5}.
oracle::ArcList g1_arcs();
std::vector<std::size_t> g1_labels();

struct Blobs {
  roleforge::Matrix points;
  std::vector<std::uint32_t> truth;
};

// k isotropic Gaussian blobs in `dim` dimensions, centres at least
// `min_separation` apart.
Blobs blobs(std::size_t k, std::size_t per_blob, std::size_t dim, double sigma, double min_separation, Rng& rng);

struct PlantedCapitalists {
  std::size_t n = 0;
  oracle::ArcList arcs;
  std::vector<std::uint32_t> planted;  // sorted
};

// Sparse random follow graph with `planted` reciprocal-heavy nodes, plus
// high-in-degree one-way hubs and reciprocal nodes below the degree floor as
// decoys.
PlantedCapitalists capitalist_graph(std::size_t n, std::size_t planted, Rng& rng);

// Planted-community follow network with IFYFM-style capitalists that follow
// widely across communities and receive many follow-backs.
PlantedCapitalists community_network(std::size_t n, std::size_t communities, std::size_t capitalists, Rng& rng);

void write_arcs(const std::filesystem::path& path, const oracle::ArcList& arcs);

}  // namespace gen

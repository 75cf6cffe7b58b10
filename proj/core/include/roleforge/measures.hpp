#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "roleforge/graph.hpp"
#include "roleforge/matrix.hpp"
#include "roleforge/partition.hpp"

namespace roleforge {

// Link structure of one node towards the community structure, for one
// direction of links.
struct DirectionalProfile {
  std::size_t k_int = 0;   // neighbors in own community
  std::size_t k_ext = 0;   // neighbors elsewhere
  std::size_t eps = 0;     // distinct external communities reached
  double lambda = 0.0;     // population std-dev of per-external-community link counts

  friend bool operator==(const DirectionalProfile&, const DirectionalProfile&) = default;
};

struct NodeCommunityProfile {
  DirectionalProfile out;
  DirectionalProfile in;

  const DirectionalProfile& operator[](Direction d) const { return d == Direction::Out ? out : in; }
  friend bool operator==(const NodeCommunityProfile&, const NodeCommunityProfile&) = default;
};

struct MeasureOptions {
  // When set, lambda is taken over every community other than the node's own,
  // unreached ones contributing a zero count.
  bool lambda_include_zeros = false;
};

// Fixed column order of the measure matrix.
enum MeasureColumn : std::size_t {
  kIntOut = 0,
  kIntIn = 1,
  kDivOut = 2,
  kDivIn = 3,
  kExtOut = 4,
  kExtIn = 5,
  kHetOut = 6,
  kHetIn = 7,
};
inline constexpr std::size_t kMeasureCount = 8;
inline constexpr std::array<std::string_view, kMeasureCount> kMeasureNames = {
    "I_int_out", "I_int_in", "D_out", "D_in", "I_ext_out", "I_ext_in", "H_out", "H_in"};

// n x 8 matrix in MeasureColumn order.
using MeasureMatrix = Matrix;

// (f(u) - mean_i) / sigma_i within u's community, population sigma. A
// community whose values are all equal (singletons included) maps to 0.
std::vector<double> z_score_within_community(std::span<const double> values, const Partition& p);

std::vector<NodeCommunityProfile> community_profile(const DirectedGraph& g, const Partition& p,
                                                    const MeasureOptions& opts = {});

// Internal intensity, diversity, external intensity and heterogeneity in
// both directions, each the within-community z-score of the matching raw
// profile field.
MeasureMatrix role_measures(const DirectedGraph& g, const Partition& p, const MeasureOptions& opts = {});
MeasureMatrix role_measures(const std::vector<NodeCommunityProfile>& profiles, const Partition& p);

enum class EmbeddednessScope { In, Out, Total };

// k_int / k in the chosen scope. Throws UndefinedValueError when k = 0.
double embeddedness(const DirectedGraph& g, const Partition& p, NodeId u, EmbeddednessScope scope);

// 1 - sum_c (k_c / k)^2 over combined in+out link counts; 0 for isolated nodes.
double participation_coefficient(const DirectedGraph& g, const Partition& p, NodeId u);

enum class GaRole {
  UltraPeripheral,
  Peripheral,
  NonHubConnector,
  NonHubKinless,
  ProvincialHub,
  ConnectorHub,
  KinlessHub,
};

// Cut points on P: a node lands in the first band whose upper bound is >= P,
// or in the last band when P exceeds them all.
struct GaThresholds {
  double hub_z = 2.5;
  std::vector<double> non_hub_cuts{0.05, 0.62, 0.80};
  std::vector<double> hub_cuts{0.30, 0.75};
};

void validate(const GaThresholds& t);
GaRole ga_role(double z, double participation, const GaThresholds& t = {});
std::string_view to_string(GaRole role);

}  // namespace roleforge

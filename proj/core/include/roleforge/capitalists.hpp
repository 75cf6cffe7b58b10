#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "roleforge/clustering.hpp"
#include "roleforge/graph.hpp"

namespace roleforge {

enum class DegreeBand { Low, High };
enum class Behavior { Fmify, Ifyfm, Passive };

struct Classification {
  DegreeBand band;
  Behavior behavior;

  friend bool operator==(const Classification&, const Classification&) = default;
};

struct CapitalistRecord {
  NodeId node = 0;
  std::size_t k_in = 0;
  std::size_t k_out = 0;
  double overlap = 0.0;
  double ratio = 0.0;
  DegreeBand band = DegreeBand::Low;
  Behavior behavior = Behavior::Fmify;
};

struct CapitalistConfig {
  double overlap_min = 0.8;
  std::size_t in_degree_min = 500;
};

inline constexpr std::size_t kLowBandMin = 500;
inline constexpr std::size_t kLowBandMax = 10000;
inline constexpr double kPassiveRatio = 0.7;

// |followers ∩ followees| / min(|followers|, |followees|); 0 when either set
// is empty.
double overlap_index(const DirectedGraph& g, NodeId u);

// Out-degree over in-degree. Throws UndefinedValueError when k_in = 0.
double ratio(const DirectedGraph& g, NodeId u);

// Low band is 500 <= k_in <= 10000, high band k_in > 10000. Ratio cuts are
// half-open ascending: [0, 0.7) passive (high band only), [0.7, 1) FMIFY
// (everything below 1 in the low band), [1, inf) IFYFM.
// Throws ConfigError when k_in < 500 or the ratio is negative/NaN.
Classification classify_record(std::size_t k_in, double ratio);
Classification classify_record(std::size_t k_in, std::size_t k_out);

// Nodes with k_in >= in_degree_min and overlap >= overlap_min, sorted by
// descending in-degree (ties by node id).
std::vector<CapitalistRecord> detect_capitalists(const DirectedGraph& g, const CapitalistConfig& cfg = {});

// The five (band, behavior) combinations the rules can produce, in report order.
inline constexpr std::array<Classification, 5> kSlices = {{
    {DegreeBand::Low, Behavior::Fmify},
    {DegreeBand::Low, Behavior::Ifyfm},
    {DegreeBand::High, Behavior::Passive},
    {DegreeBand::High, Behavior::Fmify},
    {DegreeBand::High, Behavior::Ifyfm},
}};

struct CrossTabSlice {
  Classification slice;
  std::size_t total = 0;                    // capitalists in the slice
  std::vector<std::size_t> counts;          // per group
  std::vector<double> share_of_capitalists; // % of the slice in each group
  std::vector<double> share_of_group;       // % of each group that is in the slice
};

struct CrossTab {
  std::size_t groups = 0;
  std::vector<std::size_t> group_sizes;
  std::vector<CrossTabSlice> slices;  // kSlices order
};

// Records whose node has no group (std::nullopt in node_group) are ignored.
CrossTab crosstab(std::span<const CapitalistRecord> records, std::span<const std::optional<GroupId>> node_group,
                  std::size_t groups);
CrossTab crosstab(std::span<const CapitalistRecord> records, const ClusteringResult& res);

std::string_view to_string(DegreeBand band);
std::string_view to_string(Behavior behavior);
std::optional<DegreeBand> parse_band(std::string_view text);
std::optional<Behavior> parse_behavior(std::string_view text);

}  // namespace roleforge

#include "roleforge/capitalists.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "roleforge/error.hpp"
#include "roleforge/parallel.hpp"

namespace roleforge {

namespace {

std::size_t sorted_intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

}  // namespace

double overlap_index(const DirectedGraph& g, NodeId u) {
  const auto followers = g.in_neighbors(u);
  const auto followees = g.out_neighbors(u);
  const std::size_t smaller = std::min(followers.size(), followees.size());
  if (smaller == 0) return 0.0;
  return static_cast<double>(sorted_intersection_size(followers, followees)) / static_cast<double>(smaller);
}

double ratio(const DirectedGraph& g, NodeId u) {
  const std::size_t k_in = g.in_degree(u);
  if (k_in == 0) throw UndefinedValueError(fmt::format("ratio undefined for node {} with no followers", u));
  return static_cast<double>(g.out_degree(u)) / static_cast<double>(k_in);
}

Classification classify_record(std::size_t k_in, double r) {
  if (k_in < kLowBandMin) {
    throw ConfigError(fmt::format("in-degree {} below the classification floor {}", k_in, kLowBandMin));
  }
  if (!(r >= 0.0)) throw ConfigError(fmt::format("invalid ratio {}", r));
  if (k_in <= kLowBandMax) {
    return {DegreeBand::Low, r < 1.0 ? Behavior::Fmify : Behavior::Ifyfm};
  }
  if (r < kPassiveRatio) return {DegreeBand::High, Behavior::Passive};
  return {DegreeBand::High, r < 1.0 ? Behavior::Fmify : Behavior::Ifyfm};
}

Classification classify_record(std::size_t k_in, std::size_t k_out) {
  if (k_in == 0) throw ConfigError("in-degree 0 cannot be classified");
  return classify_record(k_in, static_cast<double>(k_out) / static_cast<double>(k_in));
}

std::vector<CapitalistRecord> detect_capitalists(const DirectedGraph& g, const CapitalistConfig& cfg) {
  if (!(cfg.overlap_min >= 0.0 && cfg.overlap_min <= 1.0)) {
    throw ConfigError(fmt::format("overlap_min {} outside [0,1]", cfg.overlap_min));
  }
  // Classification requires the 500 floor even if detection is looser.
  const std::size_t floor = std::max(cfg.in_degree_min, kLowBandMin);
  const std::size_t n = g.node_count();
  const std::size_t chunks = (n + kDefaultChunk - 1) / kDefaultChunk;
  std::vector<std::vector<CapitalistRecord>> found(chunks);
  parallel_chunks(n, kDefaultChunk, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto u = static_cast<NodeId>(i);
      const std::size_t k_in = g.in_degree(u);
      if (k_in < floor) continue;
      const double ov = overlap_index(g, u);
      if (ov < cfg.overlap_min) continue;
      CapitalistRecord rec;
      rec.node = u;
      rec.k_in = k_in;
      rec.k_out = g.out_degree(u);
      rec.overlap = ov;
      rec.ratio = static_cast<double>(rec.k_out) / static_cast<double>(k_in);
      const auto cls = classify_record(k_in, rec.ratio);
      rec.band = cls.band;
      rec.behavior = cls.behavior;
      found[chunk].push_back(rec);
    }
  });
  std::vector<CapitalistRecord> out;
  for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
  std::stable_sort(out.begin(), out.end(), [](const CapitalistRecord& a, const CapitalistRecord& b) {
    return a.k_in != b.k_in ? a.k_in > b.k_in : a.node < b.node;
  });
  return out;
}

CrossTab crosstab(std::span<const CapitalistRecord> records, std::span<const std::optional<GroupId>> node_group,
                  std::size_t groups) {
  CrossTab tab;
  tab.groups = groups;
  tab.group_sizes.assign(groups, 0);
  for (const auto& g : node_group) {
    if (!g) continue;
    if (*g >= groups) throw ConfigError(fmt::format("group {} outside [0,{})", *g, groups));
    ++tab.group_sizes[*g];
  }
  for (const auto& slice : kSlices) {
    CrossTabSlice row;
    row.slice = slice;
    row.counts.assign(groups, 0);
    tab.slices.push_back(std::move(row));
  }
  for (const auto& rec : records) {
    if (rec.node >= node_group.size()) {
      throw ConfigError(fmt::format("capitalist node {} not covered by the clustering", rec.node));
    }
    const auto g = node_group[rec.node];
    if (!g) continue;
    const Classification cls{rec.band, rec.behavior};
    const auto it = std::find(kSlices.begin(), kSlices.end(), cls);
    if (it == kSlices.end()) throw ConfigError("record has an impossible band/behavior combination");
    auto& row = tab.slices[static_cast<std::size_t>(it - kSlices.begin())];
    ++row.counts[*g];
    ++row.total;
  }
  for (auto& row : tab.slices) {
    row.share_of_capitalists.assign(groups, 0.0);
    row.share_of_group.assign(groups, 0.0);
    for (std::size_t g = 0; g < groups; ++g) {
      if (row.total > 0) {
        row.share_of_capitalists[g] = 100.0 * static_cast<double>(row.counts[g]) / static_cast<double>(row.total);
      }
      if (tab.group_sizes[g] > 0) {
        row.share_of_group[g] = 100.0 * static_cast<double>(row.counts[g]) / static_cast<double>(tab.group_sizes[g]);
      }
    }
  }
  return tab;
}

CrossTab crosstab(std::span<const CapitalistRecord> records, const ClusteringResult& res) {
  std::vector<std::optional<GroupId>> node_group(res.assign.begin(), res.assign.end());
  return crosstab(records, node_group, res.k);
}

std::string_view to_string(DegreeBand band) { return band == DegreeBand::Low ? "low" : "high"; }

std::string_view to_string(Behavior behavior) {
  switch (behavior) {
    case Behavior::Fmify: return "FMIFY";
    case Behavior::Ifyfm: return "IFYFM";
    case Behavior::Passive: return "passive";
  }
  return "unknown";
}

std::optional<DegreeBand> parse_band(std::string_view text) {
  if (text == "low") return DegreeBand::Low;
  if (text == "high") return DegreeBand::High;
  return std::nullopt;
}

std::optional<Behavior> parse_behavior(std::string_view text) {
  if (text == "FMIFY") return Behavior::Fmify;
  if (text == "IFYFM") return Behavior::Ifyfm;
  if (text == "passive") return Behavior::Passive;
  return std::nullopt;
}

}  // namespace roleforge

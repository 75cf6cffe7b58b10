#include "roleforge/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "roleforge/error.hpp"
#include "roleforge/partition.hpp"

namespace roleforge {

namespace {

template <typename ArcT>
std::vector<std::uint64_t> count_offsets(std::size_t n, const std::vector<ArcT>& arcs, bool by_src) {
  std::vector<std::uint64_t> offsets(n + 1, 0);
  for (const auto& a : arcs) ++offsets[(by_src ? a.src : a.dst) + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return offsets;
}

}  // namespace

DirectedGraph DirectedGraph::from_arcs(std::size_t n, std::vector<Arc> arcs) {
  IngestStats stats;
  for (const auto& a : arcs) {
    if (a.src >= n || a.dst >= n) {
      throw OutOfRangeError(fmt::format("arc {}->{} outside node range [0,{})", a.src, a.dst, n));
    }
  }
  const auto before = arcs.size();
  std::erase_if(arcs, [](const Arc& a) { return a.src == a.dst; });
  stats.self_loops_dropped = before - arcs.size();

  std::sort(arcs.begin(), arcs.end(),
            [](const Arc& x, const Arc& y) { return x.src != y.src ? x.src < y.src : x.dst < y.dst; });
  const auto sorted = arcs.size();
  arcs.erase(std::unique(arcs.begin(), arcs.end(),
                         [](const Arc& x, const Arc& y) { return x.src == y.src && x.dst == y.dst; }),
             arcs.end());
  stats.duplicates_dropped = sorted - arcs.size();

  DirectedGraph g;
  g.out_offsets_ = count_offsets(n, arcs, true);
  g.out_targets_.resize(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) g.out_targets_[i] = arcs[i].dst;

  // Arcs are sorted by (src, dst); a stable scatter by dst leaves every
  // in-list sorted by src.
  g.in_offsets_ = count_offsets(n, arcs, false);
  g.in_sources_.resize(arcs.size());
  std::vector<std::uint64_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (const auto& a : arcs) g.in_sources_[cursor[a.dst]++] = a.src;

  g.total_weight_ = static_cast<double>(arcs.size());
  g.stats_ = stats;
  return g;
}

DirectedGraph DirectedGraph::from_weighted_arcs(std::size_t n, std::vector<WeightedArc> arcs) {
  for (const auto& a : arcs) {
    if (a.src >= n || a.dst >= n) {
      throw OutOfRangeError(fmt::format("arc {}->{} outside node range [0,{})", a.src, a.dst, n));
    }
    if (!(a.weight >= 0.0)) throw ConfigError(fmt::format("negative arc weight {}", a.weight));
  }
  std::sort(arcs.begin(), arcs.end(), [](const WeightedArc& x, const WeightedArc& y) {
    return x.src != y.src ? x.src < y.src : x.dst < y.dst;
  });
  std::vector<WeightedArc> merged;
  merged.reserve(arcs.size());
  for (const auto& a : arcs) {
    if (!merged.empty() && merged.back().src == a.src && merged.back().dst == a.dst) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }

  DirectedGraph g;
  g.out_offsets_ = count_offsets(n, merged, true);
  g.out_targets_.resize(merged.size());
  g.out_weights_.resize(merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    g.out_targets_[i] = merged[i].dst;
    g.out_weights_[i] = merged[i].weight;
    g.total_weight_ += merged[i].weight;
    if (merged[i].src == merged[i].dst) g.self_loops_ = true;
  }
  g.in_offsets_ = count_offsets(n, merged, false);
  g.in_sources_.resize(merged.size());
  g.in_weights_.resize(merged.size());
  std::vector<std::uint64_t> cursor(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  for (const auto& a : merged) {
    const auto at = cursor[a.dst]++;
    g.in_sources_[at] = a.src;
    g.in_weights_[at] = a.weight;
  }
  return g;
}

void DirectedGraph::check_node(NodeId u) const {
  if (u >= node_count()) {
    throw OutOfRangeError(fmt::format("node {} outside [0,{})", u, node_count()));
  }
}

std::span<const NodeId> DirectedGraph::out_neighbors(NodeId u) const {
  check_node(u);
  return {out_targets_.data() + out_offsets_[u], out_targets_.data() + out_offsets_[u + 1]};
}

std::span<const NodeId> DirectedGraph::in_neighbors(NodeId u) const {
  check_node(u);
  return {in_sources_.data() + in_offsets_[u], in_sources_.data() + in_offsets_[u + 1]};
}

std::span<const double> DirectedGraph::out_weights(NodeId u) const {
  check_node(u);
  if (out_weights_.empty()) return {};
  return {out_weights_.data() + out_offsets_[u], out_weights_.data() + out_offsets_[u + 1]};
}

std::span<const double> DirectedGraph::in_weights(NodeId u) const {
  check_node(u);
  if (in_weights_.empty()) return {};
  return {in_weights_.data() + in_offsets_[u], in_weights_.data() + in_offsets_[u + 1]};
}

double DirectedGraph::out_strength(NodeId u) const {
  if (!weighted()) return static_cast<double>(out_degree(u));
  const auto w = out_weights(u);
  return std::accumulate(w.begin(), w.end(), 0.0);
}

double DirectedGraph::in_strength(NodeId u) const {
  if (!weighted()) return static_cast<double>(in_degree(u));
  const auto w = in_weights(u);
  return std::accumulate(w.begin(), w.end(), 0.0);
}

double DirectedGraph::self_loop_weight(NodeId u) const {
  if (!self_loops_) return 0.0;
  const auto nbrs = out_neighbors(u);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), u);
  if (it == nbrs.end() || *it != u) return 0.0;
  return out_weights(u)[static_cast<std::size_t>(it - nbrs.begin())];
}

bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
  return a.out_offsets_ == b.out_offsets_ && a.out_targets_ == b.out_targets_ &&
         a.out_weights_ == b.out_weights_ && a.in_offsets_ == b.in_offsets_ &&
         a.in_sources_ == b.in_sources_ && a.in_weights_ == b.in_weights_ &&
         a.original_ids_ == b.original_ids_;
}

bool DirectedGraph::has_arc(NodeId u, NodeId v) const {
  const auto nbrs = out_neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

DirectedGraph DirectedGraph::transpose() const {
  DirectedGraph t;
  t.out_offsets_ = in_offsets_;
  t.out_targets_ = in_sources_;
  t.out_weights_ = in_weights_;
  t.in_offsets_ = out_offsets_;
  t.in_sources_ = out_targets_;
  t.in_weights_ = out_weights_;
  t.original_ids_ = original_ids_;
  t.total_weight_ = total_weight_;
  t.self_loops_ = self_loops_;
  t.stats_ = stats_;
  return t;
}

OriginalId DirectedGraph::original_id(NodeId u) const {
  check_node(u);
  return original_ids_.empty() ? OriginalId{u} : original_ids_[u];
}

std::optional<NodeId> DirectedGraph::dense_id(OriginalId original) const {
  if (original_ids_.empty()) {
    if (original < node_count()) return static_cast<NodeId>(original);
    return std::nullopt;
  }
  const auto it = std::lower_bound(original_ids_.begin(), original_ids_.end(), original);
  if (it == original_ids_.end() || *it != original) return std::nullopt;
  return static_cast<NodeId>(it - original_ids_.begin());
}

void DirectedGraph::set_original_ids(std::vector<OriginalId> ids) {
  if (ids.size() != node_count()) {
    throw ConfigError(fmt::format("id map has {} entries for {} nodes", ids.size(), node_count()));
  }
  if (!std::is_sorted(ids.begin(), ids.end()) ||
      std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ConfigError("id map must be strictly ascending");
  }
  original_ids_ = std::move(ids);
}

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

}  // namespace

DirectedGraph parse_edge_list(std::string_view text, EdgeConvention convention, const std::string& source) {
  std::vector<std::pair<OriginalId, OriginalId>> pairs;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    std::size_t i = 0;
    while (i < line.size() && is_blank(line[i])) ++i;
    if (i == line.size() || line[i] == '#' || line[i] == '%') continue;

    OriginalId ids[2];
    for (int f = 0; f < 2; ++f) {
      while (i < line.size() && is_blank(line[i])) ++i;
      const char* first = line.data() + i;
      const char* last = line.data() + line.size();
      auto [ptr, ec] = std::from_chars(first, last, ids[f]);
      if (ec != std::errc{} || ptr == first) {
        throw ParseError(source, line_no, fmt::format("expected two non-negative integers, got '{}'", line));
      }
      i = static_cast<std::size_t>(ptr - line.data());
      if (f == 0 && (i == line.size() || !is_blank(line[i]))) {
        throw ParseError(source, line_no, fmt::format("expected two non-negative integers, got '{}'", line));
      }
    }
    while (i < line.size() && is_blank(line[i])) ++i;
    if (i != line.size()) {
      throw ParseError(source, line_no, fmt::format("trailing data on line '{}'", line));
    }
    if (convention == EdgeConvention::SrcFollowsDst) {
      pairs.emplace_back(ids[0], ids[1]);
    } else {
      pairs.emplace_back(ids[1], ids[0]);
    }
  }

  std::vector<OriginalId> ids;
  ids.reserve(pairs.size() * 2);
  for (const auto& [a, b] : pairs) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() > std::numeric_limits<NodeId>::max()) {
    throw OutOfRangeError(fmt::format("{}: {} distinct nodes exceed the 32-bit node id space", source, ids.size()));
  }

  auto dense = [&ids](OriginalId x) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin());
  };
  std::vector<Arc> arcs;
  arcs.reserve(pairs.size());
  for (const auto& [a, b] : pairs) arcs.push_back({dense(a), dense(b)});
  pairs.clear();
  pairs.shrink_to_fit();

  auto g = DirectedGraph::from_arcs(ids.size(), std::move(arcs));
  auto stats = g.ingest_stats();
  stats.lines_read = line_no;
  g.set_ingest_stats(stats);
  g.set_original_ids(std::move(ids));
  return g;
}

DirectedGraph load_edge_list(const std::filesystem::path& path, EdgeConvention convention) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open edge list '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = std::move(buffer).str();
  return parse_edge_list(text, convention, path.string());
}

std::string format_edge_list(const DirectedGraph& g) {
  std::string out;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out_neighbors(u)) {
      fmt::format_to(std::back_inserter(out), "{} {}\n", g.original_id(u), g.original_id(v));
    }
  }
  return out;
}

void write_edge_list(const DirectedGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
  out << format_edge_list(g);
}

Degrees degrees(const DirectedGraph& g, NodeId u) {
  Degrees d;
  d.in = g.in_degree(u);
  d.out = g.out_degree(u);
  d.total = d.in + d.out;
  return d;
}

std::map<CommunityId, std::size_t> community_link_counts(const DirectedGraph& g, NodeId u,
                                                         const Partition& p, Direction dir) {
  require_covers(p, g);
  std::map<CommunityId, std::size_t> counts;
  const auto nbrs = dir == Direction::Out ? g.out_neighbors(u) : g.in_neighbors(u);
  for (NodeId v : nbrs) ++counts[p[v]];
  return counts;
}

std::optional<EdgeConvention> parse_edge_convention(std::string_view text) {
  if (text == "src-follows-dst") return EdgeConvention::SrcFollowsDst;
  if (text == "dst-follows-src") return EdgeConvention::DstFollowsSrc;
  return std::nullopt;
}

std::string_view to_string(EdgeConvention convention) {
  return convention == EdgeConvention::SrcFollowsDst ? "src-follows-dst" : "dst-follows-src";
}

}  // namespace roleforge

#include "roleforge/partition.hpp"

#include <unordered_map>

#include <fmt/format.h>

#include "roleforge/error.hpp"

namespace roleforge {

Partition::Partition(std::vector<CommunityId> assign, std::size_t n_comms)
    : assign_(std::move(assign)), n_comms_(n_comms) {
  std::vector<bool> seen(n_comms_, false);
  for (CommunityId c : assign_) {
    if (c >= n_comms_) throw ConfigError(fmt::format("community id {} outside [0,{})", c, n_comms_));
    seen[c] = true;
  }
  for (std::size_t c = 0; c < n_comms_; ++c) {
    if (!seen[c]) throw ConfigError(fmt::format("community {} has no members", c));
  }
}

namespace {

template <typename Label>
Partition relabel(std::span<const Label> labels) {
  std::unordered_map<Label, CommunityId> ids;
  std::vector<CommunityId> assign;
  assign.reserve(labels.size());
  for (Label l : labels) {
    auto [it, inserted] = ids.try_emplace(l, static_cast<CommunityId>(ids.size()));
    assign.push_back(it->second);
  }
  return Partition(std::move(assign), ids.size());
}

}  // namespace

Partition Partition::from_labels(std::span<const std::uint64_t> labels) { return relabel(labels); }
Partition Partition::from_labels(std::span<const CommunityId> labels) { return relabel(labels); }

Partition Partition::singletons(std::size_t n) {
  std::vector<CommunityId> assign(n);
  for (std::size_t i = 0; i < n; ++i) assign[i] = static_cast<CommunityId>(i);
  return Partition(std::move(assign), n);
}

Partition Partition::whole(std::size_t n) {
  return Partition(std::vector<CommunityId>(n, 0), n == 0 ? 0 : 1);
}

CommunityId Partition::community_of(NodeId u) const {
  if (u >= assign_.size()) throw OutOfRangeError(fmt::format("node {} outside partition of {} nodes", u, assign_.size()));
  return assign_[u];
}

std::vector<std::size_t> Partition::sizes() const {
  std::vector<std::size_t> s(n_comms_, 0);
  for (CommunityId c : assign_) ++s[c];
  return s;
}

std::vector<std::vector<NodeId>> Partition::members() const {
  std::vector<std::vector<NodeId>> m(n_comms_);
  for (NodeId u = 0; u < assign_.size(); ++u) m[assign_[u]].push_back(u);
  return m;
}

void require_covers(const Partition& p, const DirectedGraph& g) {
  if (p.node_count() != g.node_count()) {
    throw ConfigError(fmt::format("partition covers {} nodes, graph has {}", p.node_count(), g.node_count()));
  }
}

}  // namespace roleforge

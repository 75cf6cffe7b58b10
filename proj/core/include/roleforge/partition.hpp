#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "roleforge/graph.hpp"

namespace roleforge {

// Node -> community assignment. Community ids are contiguous in [0, n_comms)
// and every community has at least one member.
class Partition {
 public:
  Partition() = default;

  // Validates contiguity and non-emptiness; throws ConfigError otherwise.
  Partition(std::vector<CommunityId> assign, std::size_t n_comms);

  // Relabels arbitrary labels to contiguous ids in order of first appearance.
  static Partition from_labels(std::span<const std::uint64_t> labels);
  static Partition from_labels(std::span<const CommunityId> labels);

  static Partition singletons(std::size_t n);
  static Partition whole(std::size_t n);

  std::size_t node_count() const noexcept { return assign_.size(); }
  std::size_t community_count() const noexcept { return n_comms_; }

  CommunityId operator[](NodeId u) const { return assign_[u]; }
  CommunityId community_of(NodeId u) const;
  const std::vector<CommunityId>& assignment() const noexcept { return assign_; }

  std::vector<std::size_t> sizes() const;
  std::vector<std::vector<NodeId>> members() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<CommunityId> assign_;
  std::size_t n_comms_ = 0;
};

// Throws ConfigError when p does not cover every node of g.
void require_covers(const Partition& p, const DirectedGraph& g);

}  // namespace roleforge

#include "roleforge/louvain.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "roleforge/error.hpp"

namespace roleforge {

namespace {

inline double weight_at(std::span<const double> w, std::size_t i) { return w.empty() ? 1.0 : w[i]; }

__extension__ using Wide = __int128;

bool integral(double x) { return x >= 0.0 && x < 0x1p62 && x == static_cast<double>(static_cast<std::int64_t>(x)); }

// Q from per-community totals. With integral weights the numerator
// m * sum(internal) - sum(out * in) is summed exactly, so the result does
// not depend on community order and only moves when Q really changes.
double modularity_from_totals(std::span<const double> internal, std::span<const double> out_tot,
                              std::span<const double> in_tot, double m) {
  bool exact = integral(m);
  for (std::size_t c = 0; exact && c < internal.size(); ++c) {
    exact = integral(internal[c]) && integral(out_tot[c]) && integral(in_tot[c]);
  }
  if (exact) {
    Wide inside = 0, expected = 0;
    for (std::size_t c = 0; c < internal.size(); ++c) {
      inside += static_cast<Wide>(internal[c]);
      expected += static_cast<Wide>(out_tot[c]) * static_cast<Wide>(in_tot[c]);
    }
    const Wide mi = static_cast<Wide>(m);
    return static_cast<double>(mi * inside - expected) / (m * m);
  }
  double q = 0.0;
  for (std::size_t c = 0; c < internal.size(); ++c) q += internal[c] / m - (out_tot[c] / m) * (in_tot[c] / m);
  return q;
}

// Per-level state of the local-move phase. All gains are kept scaled by m^2
// so that unweighted inputs compare in exact integer arithmetic.
class LocalMover {
 public:
  LocalMover(const DirectedGraph& g, double min_gain)
      : g_(g),
        n_(g.node_count()),
        m_(g.total_weight()),
        threshold_(min_gain * m_ * m_),
        comm_(n_),
        k_out_(n_),
        k_in_(n_),
        self_(n_),
        tot_out_(n_),
        tot_in_(n_),
        internal_(n_),
        link_(n_, 0.0),
        touched_flag_(n_, false) {
    for (NodeId u = 0; u < n_; ++u) {
      comm_[u] = u;
      k_out_[u] = g.out_strength(u);
      k_in_[u] = g.in_strength(u);
      self_[u] = g.self_loop_weight(u);
      tot_out_[u] = k_out_[u];
      tot_in_[u] = k_in_[u];
      internal_[u] = self_[u];
    }
    touched_.reserve(64);
  }

  double modularity() const { return modularity_from_totals(internal_, tot_out_, tot_in_, m_); }

  // One sweep over `order`; returns the number of nodes moved.
  std::size_t pass(const std::vector<NodeId>& order) {
    std::size_t moved = 0;
    for (NodeId u : order) {
      if (move_node(u)) ++moved;
    }
    return moved;
  }

  const std::vector<CommunityId>& communities() const { return comm_; }

 private:
  void gather(NodeId u) {
    for (CommunityId c : touched_) {
      link_[c] = 0.0;
      touched_flag_[c] = false;
    }
    touched_.clear();
    auto touch = [this](CommunityId c, double w) {
      if (!touched_flag_[c]) {
        touched_flag_[c] = true;
        touched_.push_back(c);
      }
      link_[c] += w;
    };
    touch(comm_[u], 0.0);
    const auto outs = g_.out_neighbors(u);
    const auto out_w = g_.out_weights(u);
    for (std::size_t i = 0; i < outs.size(); ++i) {
      if (outs[i] != u) touch(comm_[outs[i]], weight_at(out_w, i));
    }
    const auto ins = g_.in_neighbors(u);
    const auto in_w = g_.in_weights(u);
    for (std::size_t i = 0; i < ins.size(); ++i) {
      if (ins[i] != u) touch(comm_[ins[i]], weight_at(in_w, i));
    }
  }

  double scaled_gain(NodeId u, CommunityId c) const {
    return link_[c] * m_ - (k_out_[u] * tot_in_[c] + k_in_[u] * tot_out_[c]);
  }

  bool move_node(NodeId u) {
    gather(u);
    const CommunityId from = comm_[u];

    tot_out_[from] -= k_out_[u];
    tot_in_[from] -= k_in_[u];
    internal_[from] -= link_[from] + self_[u];

    const double stay = scaled_gain(u, from);
    CommunityId best = from;
    double best_gain = 0.0;
    bool have_best = false;
    for (CommunityId c : touched_) {
      if (c == from) continue;
      const double gain = scaled_gain(u, c);
      if (!have_best || gain > best_gain || (gain == best_gain && c < best)) {
        best = c;
        best_gain = gain;
        have_best = true;
      }
    }
    const CommunityId to = (have_best && best_gain - stay > threshold_) ? best : from;

    tot_out_[to] += k_out_[u];
    tot_in_[to] += k_in_[u];
    internal_[to] += link_[to] + self_[u];
    comm_[u] = to;
    return to != from;
  }

  const DirectedGraph& g_;
  std::size_t n_;
  double m_;
  double threshold_;
  std::vector<CommunityId> comm_;
  std::vector<double> k_out_, k_in_, self_;
  std::vector<double> tot_out_, tot_in_, internal_;
  std::vector<double> link_;
  std::vector<bool> touched_flag_;
  std::vector<CommunityId> touched_;
};

}  // namespace

double directed_modularity(const DirectedGraph& g, const Partition& p) {
  require_covers(p, g);
  const double m = g.total_weight();
  if (!(m > 0.0)) throw UndefinedValueError("modularity is undefined on a graph without arcs");

  const std::size_t k = p.community_count();
  std::vector<double> internal(k, 0.0), out_tot(k, 0.0), in_tot(k, 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto nbrs = g.out_neighbors(u);
    const auto w = g.out_weights(u);
    const CommunityId cu = p[u];
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const double wi = weight_at(w, i);
      const CommunityId cv = p[nbrs[i]];
      out_tot[cu] += wi;
      in_tot[cv] += wi;
      if (cu == cv) internal[cu] += wi;
    }
  }
  return modularity_from_totals(internal, out_tot, in_tot, m);
}

DirectedGraph aggregate_graph(const DirectedGraph& g, const Partition& p) {
  require_covers(p, g);
  std::vector<WeightedArc> arcs;
  arcs.reserve(g.arc_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto nbrs = g.out_neighbors(u);
    const auto w = g.out_weights(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) arcs.push_back({p[u], p[nbrs[i]], weight_at(w, i)});
  }
  return DirectedGraph::from_weighted_arcs(p.community_count(), std::move(arcs));
}

LouvainResult louvain_directed(const DirectedGraph& g, const LouvainConfig& cfg) {
  if (!(g.total_weight() > 0.0)) throw UndefinedValueError("community detection needs at least one arc");
  if (!(cfg.min_gain >= 0.0)) throw ConfigError(fmt::format("min_gain must be >= 0, got {}", cfg.min_gain));

  LouvainResult result;
  auto& trace = result.trace;
  std::mt19937_64 rng(cfg.seed);

  // node_level[u]: node of the current level graph that original node u is in.
  std::vector<CommunityId> node_level(g.node_count());
  std::iota(node_level.begin(), node_level.end(), CommunityId{0});

  DirectedGraph level_graph;
  const DirectedGraph* current = &g;
  Partition flat = Partition::singletons(g.node_count());

  for (std::size_t level = 0; cfg.max_levels == 0 || level < cfg.max_levels; ++level) {
    LocalMover mover(*current, cfg.min_gain);
    if (level == 0) trace.pass_modularity.push_back(mover.modularity());

    std::vector<NodeId> order(current->node_count());
    std::iota(order.begin(), order.end(), NodeId{0});
    if (cfg.order == SweepOrder::Shuffled) std::shuffle(order.begin(), order.end(), rng);

    std::size_t level_moves = 0;
    for (;;) {
      const std::size_t moved = mover.pass(order);
      trace.pass_modularity.push_back(mover.modularity());
      level_moves += moved;
      if (moved == 0) break;
    }
    trace.moves += level_moves;

    const Partition level_partition = Partition::from_labels(std::span<const CommunityId>(mover.communities()));
    for (auto& c : node_level) c = level_partition[c];
    flat = Partition::from_labels(std::span<const CommunityId>(node_level));
    trace.levels.push_back(flat);

    if (level_moves == 0) break;
    level_graph = aggregate_graph(*current, level_partition);
    current = &level_graph;
  }

  result.partition = std::move(flat);
  result.modularity = directed_modularity(g, result.partition);
  return result;
}

}  // namespace roleforge

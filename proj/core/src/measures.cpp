#include "roleforge/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "roleforge/error.hpp"
#include "roleforge/parallel.hpp"

namespace roleforge {

std::vector<double> z_score_within_community(std::span<const double> values, const Partition& p) {
  if (values.size() != p.node_count()) {
    throw ConfigError(fmt::format("{} values for a partition of {} nodes", values.size(), p.node_count()));
  }
  const std::size_t k = p.community_count();
  std::vector<double> sum(k, 0.0), lo(k, std::numeric_limits<double>::infinity()),
      hi(k, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> count(k, 0);
  for (std::size_t u = 0; u < values.size(); ++u) {
    const auto c = p[static_cast<NodeId>(u)];
    sum[c] += values[u];
    lo[c] = std::min(lo[c], values[u]);
    hi[c] = std::max(hi[c], values[u]);
    ++count[c];
  }
  std::vector<double> mean(k), ss(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) mean[c] = count[c] ? sum[c] / static_cast<double>(count[c]) : 0.0;
  for (std::size_t u = 0; u < values.size(); ++u) {
    const auto c = p[static_cast<NodeId>(u)];
    const double d = values[u] - mean[c];
    ss[c] += d * d;
  }
  std::vector<double> z(values.size(), 0.0);
  for (std::size_t u = 0; u < values.size(); ++u) {
    const auto c = p[static_cast<NodeId>(u)];
    if (lo[c] == hi[c]) continue;
    const double sigma = std::sqrt(ss[c] / static_cast<double>(count[c]));
    z[u] = (values[u] - mean[c]) / sigma;
  }
  return z;
}

namespace {

__extension__ using Wide = unsigned __int128;

DirectionalProfile profile_of(std::span<const NodeId> nbrs, CommunityId own, const Partition& p,
                              std::size_t external_communities, bool include_zeros,
                              std::vector<CommunityId>& scratch) {
  DirectionalProfile prof;
  scratch.clear();
  for (NodeId v : nbrs) {
    const CommunityId c = p[v];
    if (c == own) {
      ++prof.k_int;
    } else {
      scratch.push_back(c);
    }
  }
  prof.k_ext = scratch.size();
  if (scratch.empty()) return prof;

  std::sort(scratch.begin(), scratch.end());
  // Per-community run lengths are the link counts. The variance numerator
  // P*sum(c^2) - (sum c)^2 is exact in integers, so nodes with the same
  // multiset of counts get bit-identical lambda.
  std::size_t eps = 0;
  Wide sum_sq = 0;
  for (std::size_t i = 0; i < scratch.size();) {
    std::size_t j = i;
    while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
    ++eps;
    sum_sq += static_cast<Wide>(j - i) * (j - i);
    i = j;
  }
  prof.eps = eps;

  const std::size_t population = include_zeros ? external_communities : eps;
  if (population <= 1) return prof;
  const auto total = static_cast<Wide>(prof.k_ext);
  const Wide numerator = static_cast<Wide>(population) * sum_sq - total * total;
  const double pop = static_cast<double>(population);
  prof.lambda = std::sqrt(static_cast<double>(numerator)) / pop;
  return prof;
}

}  // namespace

std::vector<NodeCommunityProfile> community_profile(const DirectedGraph& g, const Partition& p,
                                                    const MeasureOptions& opts) {
  require_covers(p, g);
  const std::size_t external = p.community_count() == 0 ? 0 : p.community_count() - 1;
  std::vector<NodeCommunityProfile> out(g.node_count());
  parallel_chunks(g.node_count(), kDefaultChunk, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<CommunityId> scratch;
    for (std::size_t i = begin; i < end; ++i) {
      const auto u = static_cast<NodeId>(i);
      const CommunityId own = p[u];
      out[u].out = profile_of(g.out_neighbors(u), own, p, external, opts.lambda_include_zeros, scratch);
      out[u].in = profile_of(g.in_neighbors(u), own, p, external, opts.lambda_include_zeros, scratch);
    }
  });
  return out;
}

MeasureMatrix role_measures(const std::vector<NodeCommunityProfile>& profiles, const Partition& p) {
  const std::size_t n = profiles.size();
  MeasureMatrix mat(n, kMeasureCount);
  std::vector<double> raw(n);
  auto fill = [&](MeasureColumn col, auto field) {
    for (std::size_t u = 0; u < n; ++u) raw[u] = field(profiles[u]);
    mat.set_column(col, z_score_within_community(raw, p));
  };
  fill(kIntOut, [](const NodeCommunityProfile& x) { return static_cast<double>(x.out.k_int); });
  fill(kIntIn, [](const NodeCommunityProfile& x) { return static_cast<double>(x.in.k_int); });
  fill(kDivOut, [](const NodeCommunityProfile& x) { return static_cast<double>(x.out.eps); });
  fill(kDivIn, [](const NodeCommunityProfile& x) { return static_cast<double>(x.in.eps); });
  fill(kExtOut, [](const NodeCommunityProfile& x) { return static_cast<double>(x.out.k_ext); });
  fill(kExtIn, [](const NodeCommunityProfile& x) { return static_cast<double>(x.in.k_ext); });
  fill(kHetOut, [](const NodeCommunityProfile& x) { return x.out.lambda; });
  fill(kHetIn, [](const NodeCommunityProfile& x) { return x.in.lambda; });
  return mat;
}

MeasureMatrix role_measures(const DirectedGraph& g, const Partition& p, const MeasureOptions& opts) {
  return role_measures(community_profile(g, p, opts), p);
}

double embeddedness(const DirectedGraph& g, const Partition& p, NodeId u, EmbeddednessScope scope) {
  require_covers(p, g);
  const CommunityId own = p.community_of(u);
  std::size_t k_int = 0;
  std::size_t k = 0;
  auto add = [&](std::span<const NodeId> nbrs) {
    for (NodeId v : nbrs) k_int += p[v] == own;
    k += nbrs.size();
  };
  if (scope != EmbeddednessScope::In) add(g.out_neighbors(u));
  if (scope != EmbeddednessScope::Out) add(g.in_neighbors(u));
  if (k == 0) throw UndefinedValueError(fmt::format("embeddedness undefined for node {} with zero degree", u));
  return static_cast<double>(k_int) / static_cast<double>(k);
}

double participation_coefficient(const DirectedGraph& g, const Partition& p, NodeId u) {
  require_covers(p, g);
  std::vector<CommunityId> comms;
  const auto outs = g.out_neighbors(u);
  const auto ins = g.in_neighbors(u);
  comms.reserve(outs.size() + ins.size());
  for (NodeId v : outs) comms.push_back(p[v]);
  for (NodeId v : ins) comms.push_back(p[v]);
  if (comms.empty()) return 0.0;
  std::sort(comms.begin(), comms.end());
  double squares = 0.0;
  for (std::size_t i = 0; i < comms.size();) {
    std::size_t j = i;
    while (j < comms.size() && comms[j] == comms[i]) ++j;
    const double kc = static_cast<double>(j - i);
    squares += kc * kc;
    i = j;
  }
  const double k = static_cast<double>(comms.size());
  return 1.0 - squares / (k * k);
}

void validate(const GaThresholds& t) {
  auto check = [](const std::vector<double>& cuts, std::size_t expected, const char* name) {
    if (cuts.size() != expected) {
      throw ConfigError(fmt::format("{} needs {} cut points, got {}", name, expected, cuts.size()));
    }
    for (std::size_t i = 0; i < cuts.size(); ++i) {
      if (!(cuts[i] >= 0.0 && cuts[i] <= 1.0)) throw ConfigError(fmt::format("{} cut {} outside [0,1]", name, cuts[i]));
      if (i > 0 && !(cuts[i] > cuts[i - 1])) throw ConfigError(fmt::format("{} cut points must ascend", name));
    }
  };
  check(t.non_hub_cuts, 3, "non-hub");
  check(t.hub_cuts, 2, "hub");
  if (!std::isfinite(t.hub_z)) throw ConfigError("hub z threshold must be finite");
}

GaRole ga_role(double z, double participation, const GaThresholds& t) {
  validate(t);
  auto band = [participation](const std::vector<double>& cuts) {
    std::size_t b = 0;
    while (b < cuts.size() && participation > cuts[b]) ++b;
    return b;
  };
  if (z >= t.hub_z) {
    static constexpr GaRole hubs[] = {GaRole::ProvincialHub, GaRole::ConnectorHub, GaRole::KinlessHub};
    return hubs[band(t.hub_cuts)];
  }
  static constexpr GaRole non_hubs[] = {GaRole::UltraPeripheral, GaRole::Peripheral, GaRole::NonHubConnector,
                                        GaRole::NonHubKinless};
  return non_hubs[band(t.non_hub_cuts)];
}

std::string_view to_string(GaRole role) {
  switch (role) {
    case GaRole::UltraPeripheral: return "ultra-peripheral";
    case GaRole::Peripheral: return "peripheral";
    case GaRole::NonHubConnector: return "non-hub connector";
    case GaRole::NonHubKinless: return "non-hub kinless";
    case GaRole::ProvincialHub: return "provincial hub";
    case GaRole::ConnectorHub: return "connector hub";
    case GaRole::KinlessHub: return "kinless hub";
  }
  return "unknown";
}

}  // namespace roleforge

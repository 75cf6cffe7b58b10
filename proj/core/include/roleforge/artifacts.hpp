#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roleforge/capitalists.hpp"
#include "roleforge/clustering.hpp"
#include "roleforge/graph.hpp"
#include "roleforge/measures.hpp"
#include "roleforge/partition.hpp"
#include "roleforge/stats.hpp"

// Text artifacts exchanged between pipeline stages. Every file opens with a
// "# role-forge <kind> config_hash=<hex>" comment; readers skip '#' lines.
namespace roleforge::artifacts {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws ParseError naming `source` if absent.
  std::size_t column(std::string_view name, const std::string& source) const;
};

Table read_tsv(const std::filesystem::path& path, bool has_header = true);

// Writes `body` atomically enough for our purposes: to a temp file that is
// renamed over the target.
void write_text(const std::filesystem::path& path, std::string_view body);

std::string header_comment(std::string_view kind, std::string_view config_hash);

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path& path);

// Partition: "original_id<TAB>community_id", one line per node, no header row.
std::string format_partition(const DirectedGraph& g, const Partition& p, std::string_view config_hash);
Partition read_partition(const std::filesystem::path& path, const DirectedGraph& g);

// Measures: header row, then original_id, community, the 8 measures,
// embeddedness (blank when undefined) and P.
std::string format_measures(const DirectedGraph& g, const Partition& p, const MeasureMatrix& mat,
                            std::string_view config_hash);

struct MeasureTable {
  std::vector<OriginalId> ids;
  std::vector<CommunityId> community;
  MeasureMatrix measures;
};
MeasureTable read_measures(const std::filesystem::path& path);

// Clusters: header row, "original_id<TAB>group".
std::string format_clusters(std::span<const OriginalId> ids, const ClusteringResult& res, std::string_view config_hash);

struct ClusterTable {
  std::vector<OriginalId> ids;
  std::vector<GroupId> group;
  std::size_t groups = 0;
};
ClusterTable read_clusters(const std::filesystem::path& path);

// Percentages of the total with two decimals, rounded so they sum to 100.00.
std::vector<std::string> rounded_percentages(std::span<const std::size_t> counts);

// Group summary: group, size, proportion (%), role, centroid coordinates.
std::string format_cluster_summary(const ClusteringResult& res, const RoleLabelThresholds& labels,
                                   std::string_view config_hash);
// Davies-Bouldin and inertia per tried k.
std::string format_k_selection(std::span<const KScore> scores, std::size_t chosen, std::string_view config_hash);

std::string format_capitalists(const DirectedGraph& g, std::span<const CapitalistRecord> records,
                               std::span<const std::optional<GroupId>> node_group, std::string_view config_hash,
                               const CapitalistConfig& cfg);
std::string format_crosstab(const CrossTab& tab, std::string_view config_hash, const CapitalistConfig& cfg);

struct MeasureStats {
  std::string measure;
  std::optional<AnovaResult> anova;  // empty when degenerate
  std::string note;
  PairwiseTests pairwise;
};
std::string format_anova(std::span<const MeasureStats> stats, std::string_view config_hash);
std::string format_pairwise(std::span<const MeasureStats> stats, std::string_view config_hash);

// Per-measure ANOVA and Bonferroni pairwise tests across cluster groups.
std::vector<MeasureStats> measure_statistics(const MeasureMatrix& measures, std::span<const GroupId> groups);

}  // namespace roleforge::artifacts

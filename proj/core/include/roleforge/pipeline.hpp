#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "roleforge/capitalists.hpp"
#include "roleforge/clustering.hpp"
#include "roleforge/error.hpp"
#include "roleforge/graph.hpp"
#include "roleforge/louvain.hpp"
#include "roleforge/measures.hpp"

namespace roleforge {

struct PipelineConfig {
  std::filesystem::path input;
  EdgeConvention direction = EdgeConvention::SrcFollowsDst;
  std::filesystem::path output_dir = "role-forge-out";
  std::uint64_t seed = 0;

  double min_gain = 1e-9;
  SweepOrder louvain_order = SweepOrder::Natural;
  std::size_t louvain_max_levels = 0;

  bool lambda_include_zeros = false;
  // Participation cut points come from the cited role typology, not from the
  // analysed data; they are configuration.
  GaThresholds ga;

  std::size_t k_min = 2;
  std::size_t k_max = 15;
  std::size_t kmeans_max_iter = 100;
  double kmeans_tol = 1e-6;
  std::size_t kmeans_restarts = 10;
  RoleLabelThresholds labels;

  double overlap_min = 0.8;
  std::size_t in_degree_min = 500;

  LouvainConfig louvain() const;
  KMeansConfig kmeans() const;
  MeasureOptions measure_options() const;
  CapitalistConfig capitalists() const;
};

// Applies key=value settings on top of `cfg`. Unknown keys and bad values
// throw ConfigError.
void apply_settings(PipelineConfig& cfg, const std::map<std::string, std::string>& settings);

// Reads a flat key=value file ('#' comments, blank lines ignored).
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

// Checks every constraint that can be checked before computing anything.
void validate(const PipelineConfig& cfg);

// Canonical key=value dump of the settings that influence results (the
// output directory is excluded), and its short hash.
std::string canonical_settings(const PipelineConfig& cfg);
std::string config_hash(const PipelineConfig& cfg);

struct ManifestEntry {
  std::string name;
  std::uintmax_t bytes = 0;
  std::string sha256;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
};

Manifest read_manifest(const std::filesystem::path& path);

// A stage failed; artifacts written by earlier stages stay on disk.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error("stage '" + stage + "' failed: " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

// Standardizes the measures, picks k by Davies-Bouldin over [k_min, k_max]
// (k_max lowered to the number of distinct rows) and orders groups by size.
struct ClusterStage {
  ClusteringResult groups;
  std::vector<KScore> scores;
};
ClusterStage cluster_measures(const MeasureMatrix& measures, const PipelineConfig& cfg);

// Ingest -> communities -> measures -> clustering -> capitalists -> stats ->
// report, writing every artifact into cfg.output_dir plus manifest.tsv.
Manifest run_pipeline(const PipelineConfig& cfg);

// Renders report.txt / report.tsv style output from the artifacts in `dir`
// (clusters.summary.tsv, capitalists.crosstab.tsv, stats.anova.tsv, and
// ga_roles.tsv when present). Throws DependencyError when one is missing.
struct Report {
  std::string text;
  std::string tsv;
};
Report render_report(const std::filesystem::path& dir, std::string_view config_hash);

}  // namespace roleforge

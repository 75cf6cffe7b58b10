#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "roleforge/artifacts.hpp"
#include "roleforge/parallel.hpp"
#include "roleforge/pipeline.hpp"

namespace fs = std::filesystem;
using namespace roleforge;

namespace {

// Flag values are collected as raw settings so a config file can be applied
// first and the flags layered on top.
struct Settings {
  std::map<std::string, std::string> values;

  void bind(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_option_function<std::string>(flag, [this, key](const std::string& v) { values[key] = v; }, help);
  }
  void bind_flag(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    app->add_flag_function(flag, [this, key](std::int64_t) { values[key] = "true"; }, help);
  }
};

PipelineConfig resolve(const std::optional<fs::path>& config_file, const Settings& flags) {
  PipelineConfig cfg;
  if (config_file) apply_settings(cfg, read_config_file(*config_file));
  apply_settings(cfg, flags.values);
  return cfg;
}

void require_path(const fs::path& p, std::string_view what) {
  if (p.empty()) throw ConfigError(fmt::format("missing --{}", what));
}

fs::path with_suffix(const fs::path& prefix, std::string_view suffix) {
  return fs::path(prefix.string() + std::string(suffix));
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write(const fs::path& p, std::string_view body) {
  ensure_parent(p);
  artifacts::write_text(p, body);
}

DirectedGraph load_input(const PipelineConfig& cfg) {
  require_path(cfg.input, "input");
  return load_edge_list(cfg.input, cfg.direction);
}

void cmd_communities(const PipelineConfig& cfg, const fs::path& output) {
  require_path(output, "output");
  const auto g = load_input(cfg);
  const auto res = louvain_directed(g, cfg.louvain());
  write(output, artifacts::format_partition(g, res.partition, config_hash(cfg)));
  fmt::print("nodes={} arcs={} communities={} modularity={:.12g}\n", g.node_count(), g.arc_count(),
              res.partition.community_count(), res.modularity);
}

void cmd_measures(const PipelineConfig& cfg, const fs::path& partition, const fs::path& output) {
  require_path(partition, "partition");
  require_path(output, "output");
  const auto g = load_input(cfg);
  const auto p = artifacts::read_partition(partition, g);
  const auto mat = role_measures(g, p, cfg.measure_options());
  write(output, artifacts::format_measures(g, p, mat, config_hash(cfg)));
}

void cmd_cluster(const PipelineConfig& cfg, const fs::path& measures, const fs::path& prefix) {
  require_path(measures, "measures");
  require_path(prefix, "output");
  validate(cfg.ga);
  if (cfg.k_min < 2 || cfg.k_min > cfg.k_max) {
    throw ConfigError(fmt::format("invalid k range [{}, {}]", cfg.k_min, cfg.k_max));
  }
  const auto table = artifacts::read_measures(measures);
  const auto out = cluster_measures(table.measures, cfg);
  const auto hash = config_hash(cfg);
  write(with_suffix(prefix, ".tsv"), artifacts::format_clusters(table.ids, out.groups, hash));
  write(with_suffix(prefix, ".summary.tsv"), artifacts::format_cluster_summary(out.groups, cfg.labels, hash));
  write(with_suffix(prefix, ".selection.tsv"), artifacts::format_k_selection(out.scores, out.groups.k, hash));
  fmt::print("k={} davies_bouldin={:.12g}\n", out.groups.k, out.groups.db_index);
}

void cmd_capitalists(const PipelineConfig& cfg, const fs::path& clusters, const fs::path& prefix) {
  require_path(prefix, "output");
  const auto g = load_input(cfg);
  const auto records = detect_capitalists(g, cfg.capitalists());
  std::vector<std::optional<GroupId>> node_group(g.node_count());
  std::size_t groups = 0;
  if (!clusters.empty()) {
    const auto table = artifacts::read_clusters(clusters);
    groups = table.groups;
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
      if (const auto u = g.dense_id(table.ids[i])) node_group[*u] = table.group[i];
    }
  }
  const auto hash = config_hash(cfg);
  write(with_suffix(prefix, ".tsv"), artifacts::format_capitalists(g, records, node_group, hash, cfg.capitalists()));
  if (!clusters.empty()) {
    write(with_suffix(prefix, ".crosstab.tsv"),
          artifacts::format_crosstab(crosstab(records, node_group, groups), hash, cfg.capitalists()));
  }
  fmt::print("capitalists={}\n", records.size());
}

void cmd_stats(const PipelineConfig& cfg, const fs::path& measures, const fs::path& clusters, const fs::path& prefix) {
  require_path(measures, "measures");
  require_path(clusters, "clusters");
  require_path(prefix, "output");
  const auto m = artifacts::read_measures(measures);
  const auto c = artifacts::read_clusters(clusters);
  std::unordered_map<OriginalId, GroupId> group_of;
  for (std::size_t i = 0; i < c.ids.size(); ++i) group_of.emplace(c.ids[i], c.group[i]);
  std::vector<GroupId> groups(m.ids.size());
  for (std::size_t i = 0; i < m.ids.size(); ++i) {
    const auto it = group_of.find(m.ids[i]);
    if (it == group_of.end()) throw ConfigError(fmt::format("node {} has no group in {}", m.ids[i], clusters.string()));
    groups[i] = it->second;
  }
  const auto stats = artifacts::measure_statistics(m.measures, groups);
  const auto hash = config_hash(cfg);
  write(with_suffix(prefix, ".anova.tsv"), artifacts::format_anova(stats, hash));
  write(with_suffix(prefix, ".pairwise.tsv"), artifacts::format_pairwise(stats, hash));
}

void cmd_report(const PipelineConfig& cfg, const fs::path& dir, const fs::path& prefix) {
  require_path(dir, "dir");
  require_path(prefix, "output");
  const auto rep = render_report(dir, config_hash(cfg));
  write(with_suffix(prefix, ".txt"), rep.text);
  write(with_suffix(prefix, ".tsv"), rep.tsv);
}

void cmd_run(const PipelineConfig& cfg) {
  const auto manifest = run_pipeline(cfg);
  fmt::print("config_hash={} artifacts={} dir={}\n", config_hash(cfg), manifest.entries.size(),
             cfg.output_dir.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"role-forge: community roles and social capitalists in directed graphs"};
  app.require_subcommand(1);
  std::optional<fs::path> config_file;
  std::size_t threads = 0;
  app.add_option("--config", config_file, "key=value settings file; flags override it")->check(CLI::ExistingFile);
  app.add_option("--threads", threads, "worker threads (default: hardware, capped by ROLE_FORGE_THREADS)");

  Settings flags;
  fs::path output, partition, measures, clusters, dir;

  auto common_graph = [&](CLI::App* sub) {
    flags.bind(sub, "--input", "input", "edge list");
    flags.bind(sub, "--direction", "direction", "src-follows-dst or dst-follows-src");
  };

  auto* communities = app.add_subcommand("communities", "Louvain communities");
  common_graph(communities);
  communities->add_option("--output", output, "partition file");
  flags.bind(communities, "--min-gain", "min_gain", "minimum modularity gain per move");
  flags.bind(communities, "--seed", "seed", "random seed");
  flags.bind(communities, "--order", "louvain_order", "natural or shuffled node sweep");
  flags.bind(communities, "--max-levels", "louvain_max_levels", "level cap (0 = until stable)");

  auto* measures_cmd = app.add_subcommand("measures", "per-node role measures");
  common_graph(measures_cmd);
  measures_cmd->add_option("--partition", partition, "partition file");
  measures_cmd->add_option("--output", output, "measures TSV");
  flags.bind_flag(measures_cmd, "--lambda-include-zeros", "lambda_include_zeros",
                  "heterogeneity over all other communities, not only connected ones");

  auto* cluster = app.add_subcommand("cluster", "k-means role groups");
  cluster->add_option("--measures", measures, "measures TSV");
  cluster->add_option("--output", output, "output prefix");
  flags.bind(cluster, "--k-min", "k_min", "smallest k tried");
  flags.bind(cluster, "--k-max", "k_max", "largest k tried");
  flags.bind(cluster, "--seed", "seed", "random seed");
  flags.bind(cluster, "--restarts", "kmeans_restarts", "k-means restarts per k");
  flags.bind(cluster, "--max-iter", "kmeans_max_iter", "Lloyd iteration cap");

  auto* capitalists = app.add_subcommand("capitalists", "social capitalist detection");
  common_graph(capitalists);
  capitalists->add_option("--clusters", clusters, "clusters TSV (adds group column and cross-tab)");
  capitalists->add_option("--output", output, "output prefix");
  flags.bind(capitalists, "--overlap-min", "overlap_min", "overlap index threshold");
  flags.bind(capitalists, "--in-degree-min", "in_degree_min", "in-degree floor (at least 500)");

  auto* stats = app.add_subcommand("stats", "ANOVA and pairwise tests across groups");
  stats->add_option("--measures", measures, "measures TSV");
  stats->add_option("--clusters", clusters, "clusters TSV");
  stats->add_option("--output", output, "output prefix");

  auto* report = app.add_subcommand("report", "tables from pipeline artifacts");
  report->add_option("--dir", dir, "artifact directory");
  report->add_option("--output", output, "output prefix");

  auto* run = app.add_subcommand("run", "whole pipeline");
  common_graph(run);
  flags.bind(run, "--output-dir", "output_dir", "artifact directory");
  flags.bind(run, "--seed", "seed", "random seed");
  flags.bind(run, "--min-gain", "min_gain", "minimum modularity gain per move");
  flags.bind(run, "--order", "louvain_order", "natural or shuffled node sweep");
  flags.bind_flag(run, "--lambda-include-zeros", "lambda_include_zeros", "heterogeneity over all other communities");
  flags.bind(run, "--k-min", "k_min", "smallest k tried");
  flags.bind(run, "--k-max", "k_max", "largest k tried");
  flags.bind(run, "--restarts", "kmeans_restarts", "k-means restarts per k");
  flags.bind(run, "--overlap-min", "overlap_min", "overlap index threshold");
  flags.bind(run, "--in-degree-min", "in_degree_min", "in-degree floor");

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads > 0) set_worker_count(threads);
    const auto cfg = resolve(config_file, flags);
    if (*communities) cmd_communities(cfg, output);
    if (*measures_cmd) cmd_measures(cfg, partition, output);
    if (*cluster) cmd_cluster(cfg, measures, output);
    if (*capitalists) cmd_capitalists(cfg, clusters, output);
    if (*stats) cmd_stats(cfg, measures, clusters, output);
    if (*report) cmd_report(cfg, dir, output);
    if (*run) cmd_run(cfg);
  } catch (const ConfigError& e) {
    fmt::print(stderr, "role-forge: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "role-forge: {}\n", e.what());
    return 1;
  }
  return 0;
}

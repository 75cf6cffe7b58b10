#include "roleforge/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "roleforge/artifacts.hpp"

namespace roleforge {

LouvainConfig PipelineConfig::louvain() const {
  LouvainConfig c;
  c.min_gain = min_gain;
  c.seed = seed;
  c.order = louvain_order;
  c.max_levels = louvain_max_levels;
  return c;
}

KMeansConfig PipelineConfig::kmeans() const {
  KMeansConfig c;
  c.seed = seed;
  c.max_iter = kmeans_max_iter;
  c.tol = kmeans_tol;
  c.restarts = kmeans_restarts;
  return c;
}

MeasureOptions PipelineConfig::measure_options() const { return {lambda_include_zeros}; }

CapitalistConfig PipelineConfig::capitalists() const { return {overlap_min, in_degree_min}; }

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError(fmt::format("{}: expected a non-negative integer, got '{}'", key, v));
  }
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out)) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v));
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, v));
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = v.find(',', start);
    out.push_back(to_real(key, trim(std::string_view(v).substr(start, comma - start))));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt::format("{}", xs[i]);
  return out;
}

}  // namespace

void apply_settings(PipelineConfig& cfg, const std::map<std::string, std::string>& settings) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"input", [&](auto&, auto& v) { cfg.input = v; }},
      {"direction",
       [&](auto& k, auto& v) {
         const auto d = parse_edge_convention(v);
         if (!d) throw ConfigError(fmt::format("{}: expected src-follows-dst or dst-follows-src, got '{}'", k, v));
         cfg.direction = *d;
       }},
      {"output_dir", [&](auto&, auto& v) { cfg.output_dir = v; }},
      {"seed", [&](auto& k, auto& v) { cfg.seed = to_unsigned(k, v); }},
      {"min_gain", [&](auto& k, auto& v) { cfg.min_gain = to_real(k, v); }},
      {"louvain_order",
       [&](auto& k, auto& v) {
         if (v == "natural") {
           cfg.louvain_order = SweepOrder::Natural;
         } else if (v == "shuffled") {
           cfg.louvain_order = SweepOrder::Shuffled;
         } else {
           throw ConfigError(fmt::format("{}: expected natural or shuffled, got '{}'", k, v));
         }
       }},
      {"louvain_max_levels", [&](auto& k, auto& v) { cfg.louvain_max_levels = to_unsigned(k, v); }},
      {"lambda_include_zeros", [&](auto& k, auto& v) { cfg.lambda_include_zeros = to_bool(k, v); }},
      {"ga_hub_z", [&](auto& k, auto& v) { cfg.ga.hub_z = to_real(k, v); }},
      {"ga_non_hub_cuts", [&](auto& k, auto& v) { cfg.ga.non_hub_cuts = to_list(k, v); }},
      {"ga_hub_cuts", [&](auto& k, auto& v) { cfg.ga.hub_cuts = to_list(k, v); }},
      {"k_min", [&](auto& k, auto& v) { cfg.k_min = to_unsigned(k, v); }},
      {"k_max", [&](auto& k, auto& v) { cfg.k_max = to_unsigned(k, v); }},
      {"kmeans_max_iter", [&](auto& k, auto& v) { cfg.kmeans_max_iter = to_unsigned(k, v); }},
      {"kmeans_tol", [&](auto& k, auto& v) { cfg.kmeans_tol = to_real(k, v); }},
      {"kmeans_restarts", [&](auto& k, auto& v) { cfg.kmeans_restarts = to_unsigned(k, v); }},
      {"label_pivot", [&](auto& k, auto& v) { cfg.labels.pivot = to_real(k, v); }},
      {"label_connector", [&](auto& k, auto& v) { cfg.labels.connector = to_real(k, v); }},
      {"label_orphan", [&](auto& k, auto& v) { cfg.labels.orphan = to_real(k, v); }},
      {"overlap_min", [&](auto& k, auto& v) { cfg.overlap_min = to_real(k, v); }},
      {"in_degree_min", [&](auto& k, auto& v) { cfg.in_degree_min = to_unsigned(k, v); }},
  };
  for (const auto& [key, value] : settings) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(fmt::format("unknown setting '{}'", key));
    it->second(key, value);
  }
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}:{}: expected key=value", path.string(), line_no));
    }
    out[trim(std::string_view(t).substr(0, eq))] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

void validate(const PipelineConfig& cfg) {
  if (cfg.input.empty()) throw ConfigError("no input edge list given");
  if (!std::filesystem::is_regular_file(cfg.input)) {
    throw ConfigError(fmt::format("input '{}' does not exist", cfg.input.string()));
  }
  if (cfg.k_min < 2) throw ConfigError(fmt::format("k_min must be at least 2, got {}", cfg.k_min));
  if (cfg.k_min > cfg.k_max) throw ConfigError(fmt::format("k_min {} exceeds k_max {}", cfg.k_min, cfg.k_max));
  if (!(cfg.min_gain >= 0.0)) throw ConfigError("min_gain must be >= 0");
  if (cfg.kmeans_restarts == 0) throw ConfigError("kmeans_restarts must be at least 1");
  if (cfg.kmeans_max_iter == 0) throw ConfigError("kmeans_max_iter must be at least 1");
  if (!(cfg.kmeans_tol >= 0.0)) throw ConfigError("kmeans_tol must be >= 0");
  if (!(cfg.overlap_min >= 0.0 && cfg.overlap_min <= 1.0)) throw ConfigError("overlap_min must lie in [0,1]");
  validate(cfg.ga);
}

std::string canonical_settings(const PipelineConfig& cfg) {
  std::string out;
  auto put = [&out](std::string_view key, const auto& value) { fmt::format_to(std::back_inserter(out), "{}={}\n", key, value); };
  put("input", cfg.input.string());
  put("direction", to_string(cfg.direction));
  put("seed", cfg.seed);
  put("min_gain", cfg.min_gain);
  put("louvain_order", cfg.louvain_order == SweepOrder::Natural ? "natural" : "shuffled");
  put("louvain_max_levels", cfg.louvain_max_levels);
  put("lambda_include_zeros", cfg.lambda_include_zeros ? "true" : "false");
  put("ga_hub_z", cfg.ga.hub_z);
  put("ga_non_hub_cuts", join(cfg.ga.non_hub_cuts));
  put("ga_hub_cuts", join(cfg.ga.hub_cuts));
  put("k_min", cfg.k_min);
  put("k_max", cfg.k_max);
  put("kmeans_max_iter", cfg.kmeans_max_iter);
  put("kmeans_tol", cfg.kmeans_tol);
  put("kmeans_restarts", cfg.kmeans_restarts);
  put("label_pivot", cfg.labels.pivot);
  put("label_connector", cfg.labels.connector);
  put("label_orphan", cfg.labels.orphan);
  put("overlap_min", cfg.overlap_min);
  put("in_degree_min", cfg.in_degree_min);
  return out;
}

std::string config_hash(const PipelineConfig& cfg) {
  return artifacts::sha256_hex(canonical_settings(cfg)).substr(0, 16);
}

Manifest read_manifest(const std::filesystem::path& path) {
  const auto t = artifacts::read_tsv(path);
  const std::string src = path.string();
  const auto name = t.column("file", src);
  const auto bytes = t.column("bytes", src);
  const auto sha = t.column("sha256", src);
  Manifest m;
  for (const auto& row : t.rows) m.entries.push_back({row[name], std::stoull(row[bytes]), row[sha]});
  return m;
}

namespace {

std::size_t distinct_rows(const Matrix& mat) {
  std::vector<std::size_t> idx(mat.rows());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    const auto ra = mat.row(a);
    const auto rb = mat.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(idx.begin(), idx.end(), less);
  std::size_t distinct = idx.empty() ? 0 : 1;
  for (std::size_t i = 1; i < idx.size(); ++i) distinct += less(idx[i - 1], idx[i]) ? 1 : 0;
  return distinct;
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

std::string format_ga_roles(const DirectedGraph& g, const Partition& p, const std::vector<NodeCommunityProfile>& prof,
                            const GaThresholds& t, std::string_view hash) {
  std::vector<double> internal(prof.size());
  for (std::size_t u = 0; u < prof.size(); ++u) internal[u] = static_cast<double>(prof[u].in.k_int + prof[u].out.k_int);
  const auto z = z_score_within_community(internal, p);
  constexpr std::array roles = {GaRole::UltraPeripheral, GaRole::Peripheral,    GaRole::NonHubConnector,
                                GaRole::NonHubKinless,   GaRole::ProvincialHub, GaRole::ConnectorHub,
                                GaRole::KinlessHub};
  std::array<std::size_t, roles.size()> counts{};
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto r = ga_role(z[u], participation_coefficient(g, p, u), t);
    ++counts[static_cast<std::size_t>(r)];
  }
  std::string out = artifacts::header_comment("ga-roles", hash);
  out += "role\tcount\tproportion\n";
  for (std::size_t i = 0; i < roles.size(); ++i) {
    const double share = g.node_count() ? 100.0 * static_cast<double>(counts[i]) / static_cast<double>(g.node_count()) : 0.0;
    fmt::format_to(std::back_inserter(out), "{}\t{}\t{:.2f}\n", to_string(roles[i]), counts[i], share);
  }
  return out;
}

}  // namespace

ClusterStage cluster_measures(const MeasureMatrix& measures, const PipelineConfig& cfg) {
  const Matrix standardized = standardize(measures);
  const std::size_t k_max = std::min(cfg.k_max, distinct_rows(standardized));
  if (k_max < cfg.k_min) {
    throw DegenerateError(fmt::format("only {} distinct measure rows; cannot try k >= {}", k_max, cfg.k_min));
  }
  auto sel = select_k(standardized, cfg.k_min, k_max, cfg.kmeans());
  return {order_groups_by_size(sel.best), std::move(sel.scores)};
}

Manifest run_pipeline(const PipelineConfig& cfg) {
  validate(cfg);
  const std::string hash = config_hash(cfg);
  const auto& dir = cfg.output_dir;
  std::filesystem::create_directories(dir);

  std::vector<std::string> written;
  auto emit = [&](const std::string& name, std::string_view body) {
    artifacts::write_text(dir / name, body);
    written.push_back(name);
  };

  const DirectedGraph g = stage("ingest", [&] {
    auto graph = load_edge_list(cfg.input, cfg.direction);
    std::string ids = artifacts::header_comment("id-map", hash);
    const auto& st = graph.ingest_stats();
    fmt::format_to(std::back_inserter(ids), "# nodes={} arcs={} self_loops_dropped={} duplicates_dropped={}\n",
                   graph.node_count(), graph.arc_count(), st.self_loops_dropped, st.duplicates_dropped);
    ids += "node\toriginal_id\n";
    for (NodeId u = 0; u < graph.node_count(); ++u) fmt::format_to(std::back_inserter(ids), "{}\t{}\n", u, graph.original_id(u));
    emit("id_map.tsv", ids);
    return graph;
  });

  const Partition partition = stage("communities", [&] {
    auto res = louvain_directed(g, cfg.louvain());
    emit("partition.tsv", artifacts::format_partition(g, res.partition, hash));
    std::string trace = artifacts::header_comment("louvain-trace", hash);
    trace += "pass\tmodularity\n";
    for (std::size_t i = 0; i < res.trace.pass_modularity.size(); ++i) {
      fmt::format_to(std::back_inserter(trace), "{}\t{}\n", i, res.trace.pass_modularity[i]);
    }
    emit("partition.trace.tsv", trace);
    return res.partition;
  });

  const MeasureMatrix measures = stage("measures", [&] {
    const auto profiles = community_profile(g, partition, cfg.measure_options());
    auto mat = role_measures(profiles, partition);
    emit("measures.tsv", artifacts::format_measures(g, partition, mat, hash));
    emit("ga_roles.tsv", format_ga_roles(g, partition, profiles, cfg.ga, hash));
    return mat;
  });

  const ClusteringResult clusters = stage("clustering", [&] {
    auto clustered = cluster_measures(measures, cfg);
    auto& ordered = clustered.groups;
    std::vector<OriginalId> ids(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) ids[u] = g.original_id(u);
    emit("clusters.tsv", artifacts::format_clusters(ids, ordered, hash));
    emit("clusters.summary.tsv", artifacts::format_cluster_summary(ordered, cfg.labels, hash));
    emit("clusters.selection.tsv", artifacts::format_k_selection(clustered.scores, ordered.k, hash));
    return std::move(ordered);
  });

  stage("capitalists", [&] {
    const auto records = detect_capitalists(g, cfg.capitalists());
    std::vector<std::optional<GroupId>> node_group(clusters.assign.begin(), clusters.assign.end());
    emit("capitalists.tsv", artifacts::format_capitalists(g, records, node_group, hash, cfg.capitalists()));
    emit("capitalists.crosstab.tsv",
         artifacts::format_crosstab(crosstab(records, node_group, clusters.k), hash, cfg.capitalists()));
    return 0;
  });

  stage("stats", [&] {
    const auto stats = artifacts::measure_statistics(measures, clusters.assign);
    emit("stats.anova.tsv", artifacts::format_anova(stats, hash));
    emit("stats.pairwise.tsv", artifacts::format_pairwise(stats, hash));
    return 0;
  });

  stage("report", [&] {
    const auto report = render_report(dir, hash);
    emit("report.txt", report.text);
    emit("report.tsv", report.tsv);
    return 0;
  });

  Manifest manifest;
  std::string body = artifacts::header_comment("manifest", hash);
  body += "file\tbytes\tsha256\n";
  for (const auto& name : written) {
    ManifestEntry e{name, std::filesystem::file_size(dir / name), artifacts::file_sha256(dir / name)};
    fmt::format_to(std::back_inserter(body), "{}\t{}\t{}\n", e.name, e.bytes, e.sha256);
    manifest.entries.push_back(std::move(e));
  }
  artifacts::write_text(dir / "manifest.tsv", body);
  return manifest;
}

namespace {

std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  std::string out;
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t c = 0; c < r.size(); ++c) {
      line += c + 1 < r.size() ? fmt::format("{:<{}}  ", r[c], width[c]) : r[c];
    }
    out += line + '\n';
  }
  return out;
}

artifacts::Table require(const std::filesystem::path& dir, const std::string& name) {
  const auto path = dir / name;
  if (!std::filesystem::is_regular_file(path)) {
    throw DependencyError(fmt::format("report needs '{}', which is missing", path.string()));
  }
  return artifacts::read_tsv(path);
}

}  // namespace

Report render_report(const std::filesystem::path& dir, std::string_view config_hash) {
  const auto summary = require(dir, "clusters.summary.tsv");
  const auto cross = require(dir, "capitalists.crosstab.tsv");
  const auto anova = require(dir, "stats.anova.tsv");
  std::optional<artifacts::Table> ga;
  if (std::filesystem::is_regular_file(dir / "ga_roles.tsv")) ga = artifacts::read_tsv(dir / "ga_roles.tsv");

  Report rep;
  rep.text = artifacts::header_comment("report", config_hash);
  rep.tsv = artifacts::header_comment("report", config_hash);
  rep.tsv += "table\trow\tcolumn\tvalue\n";
  auto tsv = [&rep](std::string_view table, std::string_view row, std::string_view col, std::string_view value) {
    fmt::format_to(std::back_inserter(rep.tsv), "{}\t{}\t{}\t{}\n", table, row, col, value);
  };

  const std::string s_src = (dir / "clusters.summary.tsv").string();
  const auto c_group = summary.column("group", s_src);
  const auto c_size = summary.column("size", s_src);
  const auto c_prop = summary.column("proportion", s_src);
  const auto c_role = summary.column("role", s_src);

  std::vector<std::vector<std::string>> t1{{"group", "size", "proportion", "role"}};
  for (const auto& r : summary.rows) {
    const std::string g = "G" + r[c_group];
    t1.push_back({g, r[c_size], r[c_prop] + "%", r[c_role]});
    tsv("groups", g, "size", r[c_size]);
    tsv("groups", g, "proportion", r[c_prop]);
    tsv("groups", g, "role", r[c_role]);
  }
  rep.text += "\nTable 1. Groups\n" + aligned(t1);

  std::vector<std::vector<std::string>> t2{{"group"}};
  for (auto name : kMeasureNames) t2.front().emplace_back(name);
  for (const auto& r : summary.rows) {
    std::vector<std::string> line{"G" + r[c_group]};
    for (auto name : kMeasureNames) {
      const auto v = std::strtod(r[summary.column(name, s_src)].c_str(), nullptr);
      line.push_back(fmt::format("{:.2f}", v));
      tsv("centroids", line.front(), name, r[summary.column(name, s_src)]);
    }
    t2.push_back(std::move(line));
  }
  rep.text += "\nTable 2. Group centroids (standardized measures)\n" + aligned(t2);

  const std::string x_src = (dir / "capitalists.crosstab.tsv").string();
  const auto x_band = cross.column("band", x_src);
  const auto x_beh = cross.column("behavior", x_src);
  const auto x_table = cross.column("table", x_src);
  const auto x_total = cross.column("total", x_src);
  std::vector<std::size_t> group_cols;
  for (std::size_t c = x_total + 1; c < cross.header.size(); ++c) group_cols.push_back(c);

  auto band_table = [&](std::string_view band, std::string_view title) {
    std::vector<std::vector<std::string>> t{{"behavior", "share", "total"}};
    for (auto c : group_cols) t.front().push_back(cross.header[c]);
    for (const auto& r : cross.rows) {
      if (r[x_band] != band || r[x_table] == "count") continue;
      std::vector<std::string> line{r[x_beh], r[x_table] == "share_of_capitalists" ? "% of slice" : "% of group",
                                    r[x_total]};
      for (auto c : group_cols) {
        line.push_back(r[c] + "%");
        tsv(fmt::format("capitalists_{}", band), fmt::format("{}/{}", r[x_beh], r[x_table]), cross.header[c], r[c]);
      }
      t.push_back(std::move(line));
    }
    rep.text += fmt::format("\n{}\n", title) + aligned(t);
  };
  band_table("low", fmt::format("Table 3. Capitalists with {} <= in-degree <= {}", kLowBandMin, kLowBandMax));
  band_table("high", fmt::format("Table 4. Capitalists with in-degree > {}", kLowBandMax));

  const std::string a_src = (dir / "stats.anova.tsv").string();
  std::vector<std::vector<std::string>> ta{{"measure", "F", "df1", "df2", "p", "note"}};
  for (const auto& r : anova.rows) {
    const auto& m = r[anova.column("measure", a_src)];
    const auto& f = r[anova.column("F", a_src)];
    const auto& p = r[anova.column("p", a_src)];
    ta.push_back({m, f == "NA" ? f : fmt::format("{:.4g}", std::strtod(f.c_str(), nullptr)),
                  r[anova.column("df_between", a_src)], r[anova.column("df_within", a_src)], p,
                  r[anova.column("note", a_src)]});
    tsv("anova", m, "F", f);
    tsv("anova", m, "p", p);
  }
  rep.text += "\nOne-way ANOVA across groups\n" + aligned(ta);

  if (ga) {
    const std::string g_src = (dir / "ga_roles.tsv").string();
    std::vector<std::vector<std::string>> tg{{"role", "count", "proportion"}};
    for (const auto& r : ga->rows) {
      const auto& role = r[ga->column("role", g_src)];
      tg.push_back({role, r[ga->column("count", g_src)], r[ga->column("proportion", g_src)] + "%"});
      tsv("ga_roles", role, "count", r[ga->column("count", g_src)]);
    }
    rep.text += "\nGuimera-Amaral roles\n" + aligned(tg);
  }
  return rep;
}

}  // namespace roleforge

#include "roleforge/artifacts.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "roleforge/error.hpp"

namespace roleforge::artifacts {

namespace {

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

template <typename T>
T parse_number(std::string_view text, const std::string& source, std::size_t line) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ParseError(source, line, fmt::format("bad number '{}'", text));
  return value;
}

double parse_real(std::string_view text, const std::string& source, std::size_t line) {
  // from_chars for double is unavailable in libstdc++ 11.
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ParseError(source, line, fmt::format("bad number '{}'", text));
  return v;
}

std::string num(double v) {
  if (std::isnan(v)) return "NA";
  return fmt::format("{}", v);
}

}  // namespace

std::size_t Table::column(std::string_view name, const std::string& source) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError(source, 0, fmt::format("missing column '{}'", name));
}

Table read_tsv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DependencyError(fmt::format("cannot open '{}'", path.string()));
  Table t;
  std::string line;
  bool header_done = !has_header;
  std::size_t width = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split_tabs(line);
    if (!header_done) {
      t.header = std::move(fields);
      width = t.header.size();
      header_done = true;
      continue;
    }
    if (width != 0 && fields.size() != width) {
      throw ParseError(path.string(), line_no, fmt::format("expected {} fields, got {}", width, fields.size()));
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

void write_text(const std::filesystem::path& path, std::string_view body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(fmt::format("cannot write '{}'", path.string()));
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw ConfigError(fmt::format("short write to '{}'", path.string()));
  }
  std::filesystem::rename(tmp, path);
}

std::string header_comment(std::string_view kind, std::string_view config_hash) {
  return fmt::format("# role-forge {} config_hash={}\n", kind, config_hash);
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) fmt::format_to(std::back_inserter(hex), "{:02x}", digest[i]);
  return hex;
}

std::string file_sha256(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DependencyError(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

std::string format_partition(const DirectedGraph& g, const Partition& p, std::string_view config_hash) {
  require_covers(p, g);
  std::string out = header_comment("partition", config_hash);
  for (NodeId u = 0; u < g.node_count(); ++u) fmt::format_to(std::back_inserter(out), "{}\t{}\n", g.original_id(u), p[u]);
  return out;
}

Partition read_partition(const std::filesystem::path& path, const DirectedGraph& g) {
  const auto t = read_tsv(path, false);
  const std::string src = path.string();
  std::vector<std::uint64_t> labels(g.node_count());
  std::vector<bool> seen(g.node_count(), false);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (row.size() != 2) throw ParseError(src, i + 1, "expected 'original_id<TAB>community_id'");
    const auto original = parse_number<OriginalId>(row[0], src, i + 1);
    const auto dense = g.dense_id(original);
    if (!dense) throw ParseError(src, i + 1, fmt::format("node {} is not in the graph", original));
    if (seen[*dense]) throw ParseError(src, i + 1, fmt::format("node {} assigned twice", original));
    seen[*dense] = true;
    labels[*dense] = parse_number<std::uint64_t>(row[1], src, i + 1);
  }
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!seen[u]) throw ConfigError(fmt::format("{}: node {} has no community", src, g.original_id(u)));
  }
  return Partition::from_labels(std::span<const std::uint64_t>(labels));
}

std::string format_measures(const DirectedGraph& g, const Partition& p, const MeasureMatrix& mat,
                            std::string_view config_hash) {
  require_covers(p, g);
  std::string out = header_comment("measures", config_hash);
  out += "original_id\tcommunity";
  for (auto name : kMeasureNames) fmt::format_to(std::back_inserter(out), "\t{}", name);
  out += "\tembeddedness\tP\n";
  for (NodeId u = 0; u < g.node_count(); ++u) {
    fmt::format_to(std::back_inserter(out), "{}\t{}", g.original_id(u), p[u]);
    for (double v : mat.row(u)) fmt::format_to(std::back_inserter(out), "\t{}", v);
    out += '\t';
    if (degrees(g, u).total > 0) out += num(embeddedness(g, p, u, EmbeddednessScope::Total));
    fmt::format_to(std::back_inserter(out), "\t{}\n", participation_coefficient(g, p, u));
  }
  return out;
}

MeasureTable read_measures(const std::filesystem::path& path) {
  const auto t = read_tsv(path);
  const std::string src = path.string();
  const auto id_col = t.column("original_id", src);
  const auto comm_col = t.column("community", src);
  std::array<std::size_t, kMeasureCount> cols{};
  for (std::size_t c = 0; c < kMeasureCount; ++c) cols[c] = t.column(kMeasureNames[c], src);

  MeasureTable m;
  m.measures = MeasureMatrix(t.rows.size(), kMeasureCount);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    m.ids.push_back(parse_number<OriginalId>(row[id_col], src, r + 2));
    m.community.push_back(parse_number<CommunityId>(row[comm_col], src, r + 2));
    for (std::size_t c = 0; c < kMeasureCount; ++c) m.measures(r, c) = parse_real(row[cols[c]], src, r + 2);
  }
  return m;
}

std::string format_clusters(std::span<const OriginalId> ids, const ClusteringResult& res, std::string_view config_hash) {
  if (ids.size() != res.assign.size()) throw ConfigError("id list does not match the clustering");
  std::string out = header_comment("clusters", config_hash);
  out += "original_id\tgroup\n";
  for (std::size_t i = 0; i < ids.size(); ++i) fmt::format_to(std::back_inserter(out), "{}\t{}\n", ids[i], res.assign[i]);
  return out;
}

ClusterTable read_clusters(const std::filesystem::path& path) {
  const auto t = read_tsv(path);
  const std::string src = path.string();
  const auto id_col = t.column("original_id", src);
  const auto group_col = t.column("group", src);
  ClusterTable c;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    c.ids.push_back(parse_number<OriginalId>(t.rows[r][id_col], src, r + 2));
    const auto g = parse_number<GroupId>(t.rows[r][group_col], src, r + 2);
    c.group.push_back(g);
    c.groups = std::max<std::size_t>(c.groups, std::size_t{g} + 1);
  }
  return c;
}

std::vector<std::string> rounded_percentages(std::span<const std::size_t> counts) {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  std::vector<std::string> out(counts.size(), "0.00");
  if (total == 0) return out;
  // Largest remainder on hundredths of a percent, so the printed column sums
  // to exactly 100.00.
  std::vector<std::uint64_t> units(counts.size());
  std::vector<std::pair<std::uint64_t, std::size_t>> remainders;
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const std::uint64_t scaled = static_cast<std::uint64_t>(counts[i]) * 10000;
    units[i] = scaled / total;
    assigned += units[i];
    remainders.emplace_back(scaled % total, i);
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  for (std::size_t r = 0; assigned < 10000; ++r, ++assigned) ++units[remainders[r].second];
  for (std::size_t i = 0; i < counts.size(); ++i) out[i] = fmt::format("{}.{:02}", units[i] / 100, units[i] % 100);
  return out;
}

std::string format_cluster_summary(const ClusteringResult& res, const RoleLabelThresholds& labels,
                                   std::string_view config_hash) {
  std::string out = header_comment("cluster-summary", config_hash);
  out += "group\tsize\tproportion\trole";
  for (auto name : kMeasureNames) fmt::format_to(std::back_inserter(out), "\t{}", name);
  out += '\n';
  const auto sizes = res.sizes();
  const auto shares = rounded_percentages(sizes);
  for (std::size_t g = 0; g < res.k; ++g) {
    fmt::format_to(std::back_inserter(out), "{}\t{}\t{}\t{}", g, sizes[g], shares[g],
                   label_role(res.centroids.row(g), labels));
    for (double v : res.centroids.row(g)) fmt::format_to(std::back_inserter(out), "\t{}", v);
    out += '\n';
  }
  return out;
}

std::string format_k_selection(std::span<const KScore> scores, std::size_t chosen, std::string_view config_hash) {
  std::string out = header_comment("k-selection", config_hash);
  out += "k\tdavies_bouldin\tinertia\tselected\n";
  for (const auto& s : scores) {
    fmt::format_to(std::back_inserter(out), "{}\t{}\t{}\t{}\n", s.k, s.db_index, s.inertia, s.k == chosen ? 1 : 0);
  }
  return out;
}

std::string format_capitalists(const DirectedGraph& g, std::span<const CapitalistRecord> records,
                               std::span<const std::optional<GroupId>> node_group, std::string_view config_hash,
                               const CapitalistConfig& cfg) {
  std::string out = header_comment("capitalists", config_hash);
  fmt::format_to(std::back_inserter(out), "# overlap_min={} in_degree_min={}\n", cfg.overlap_min, cfg.in_degree_min);
  out += "original_id\tk_in\tk_out\toverlap\tratio\tband\tbehavior\tgroup\n";
  for (const auto& r : records) {
    std::string group = "NA";
    if (r.node < node_group.size() && node_group[r.node]) group = fmt::format("{}", *node_group[r.node]);
    fmt::format_to(std::back_inserter(out), "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", g.original_id(r.node), r.k_in, r.k_out,
                   r.overlap, r.ratio, to_string(r.band), to_string(r.behavior), group);
  }
  return out;
}

std::string format_crosstab(const CrossTab& tab, std::string_view config_hash, const CapitalistConfig& cfg) {
  std::string out = header_comment("capitalist-crosstab", config_hash);
  fmt::format_to(std::back_inserter(out), "# overlap_min={} in_degree_min={}\n", cfg.overlap_min, cfg.in_degree_min);
  out += "band\tbehavior\ttable\ttotal";
  for (std::size_t g = 0; g < tab.groups; ++g) fmt::format_to(std::back_inserter(out), "\tG{}", g);
  out += '\n';
  out += "all\tall\tgroup_size\t";
  std::size_t total = 0;
  for (auto s : tab.group_sizes) total += s;
  out += fmt::format("{}", total);
  for (auto s : tab.group_sizes) fmt::format_to(std::back_inserter(out), "\t{}", s);
  out += '\n';
  for (const auto& row : tab.slices) {
    const auto band = to_string(row.slice.band);
    const auto beh = to_string(row.slice.behavior);
    fmt::format_to(std::back_inserter(out), "{}\t{}\tcount\t{}", band, beh, row.total);
    for (auto c : row.counts) fmt::format_to(std::back_inserter(out), "\t{}", c);
    fmt::format_to(std::back_inserter(out), "\n{}\t{}\tshare_of_capitalists\t{}", band, beh, row.total);
    for (const auto& v : rounded_percentages(row.counts)) fmt::format_to(std::back_inserter(out), "\t{}", v);
    fmt::format_to(std::back_inserter(out), "\n{}\t{}\tshare_of_group\t{}", band, beh, row.total);
    for (double v : row.share_of_group) fmt::format_to(std::back_inserter(out), "\t{:.2f}", v);
    out += '\n';
  }
  return out;
}

std::vector<MeasureStats> measure_statistics(const MeasureMatrix& measures, std::span<const GroupId> groups) {
  std::vector<MeasureStats> out;
  for (std::size_t c = 0; c < measures.cols(); ++c) {
    MeasureStats s;
    s.measure = std::string(c < kMeasureCount ? kMeasureNames[c] : std::string_view("col"));
    const auto values = measures.column(c);
    try {
      s.anova = one_way_anova(values, groups);
    } catch (const DegenerateError& e) {
      s.note = "degenerate";
    } catch (const ConfigError& e) {
      s.note = "undefined";
    }
    s.pairwise = pairwise_t_bonferroni(values, groups);
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_anova(std::span<const MeasureStats> stats, std::string_view config_hash) {
  std::string out = header_comment("anova", config_hash);
  out += "measure\tF\tdf_between\tdf_within\tp\tnote\n";
  for (const auto& s : stats) {
    if (s.anova) {
      fmt::format_to(std::back_inserter(out), "{}\t{}\t{}\t{}\t{}\t{}\n", s.measure, s.anova->f, s.anova->df_between,
                     s.anova->df_within, format_p(s.anova->p), s.note);
    } else {
      fmt::format_to(std::back_inserter(out), "{}\tNA\tNA\tNA\tNA\t{}\n", s.measure, s.note);
    }
  }
  return out;
}

std::string format_pairwise(std::span<const MeasureStats> stats, std::string_view config_hash) {
  std::string out = header_comment("pairwise-bonferroni", config_hash);
  std::vector<std::uint32_t> labels;
  if (!stats.empty()) labels = stats.front().pairwise.groups;
  out += "measure\tgroup";
  for (auto g : labels) fmt::format_to(std::back_inserter(out), "\tG{}", g);
  out += '\n';
  for (const auto& s : stats) {
    const auto& pw = s.pairwise;
    for (std::size_t i = 0; i < pw.groups.size(); ++i) {
      fmt::format_to(std::back_inserter(out), "{}\tG{}", s.measure, pw.groups[i]);
      for (std::size_t j = 0; j < pw.groups.size(); ++j) {
        fmt::format_to(std::back_inserter(out), "\t{}", format_p(pw.adjusted[i][j]));
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace roleforge::artifacts

#include "roleforge/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "roleforge/error.hpp"
#include "roleforge/measures.hpp"
#include "roleforge/parallel.hpp"

namespace roleforge {

std::vector<std::size_t> ClusteringResult::sizes() const {
  std::vector<std::size_t> s(k, 0);
  for (GroupId g : assign) ++s[g];
  return s;
}

Matrix standardize(const Matrix& mat) {
  Matrix out(mat.rows(), mat.cols());
  if (mat.rows() == 0) return out;
  const double n = static_cast<double>(mat.rows());
  for (std::size_t c = 0; c < mat.cols(); ++c) {
    double sum = 0.0;
    double lo = mat(0, c);
    double hi = mat(0, c);
    for (std::size_t r = 0; r < mat.rows(); ++r) {
      sum += mat(r, c);
      lo = std::min(lo, mat(r, c));
      hi = std::max(hi, mat(r, c));
    }
    if (lo == hi) continue;
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t r = 0; r < mat.rows(); ++r) ss += (mat(r, c) - mean) * (mat(r, c) - mean);
    const double sd = std::sqrt(ss / n);
    for (std::size_t r = 0; r < mat.rows(); ++r) out(r, c) = (mat(r, c) - mean) / sd;
  }
  return out;
}

namespace {

constexpr std::size_t kChunk = 2048;

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct Lloyd {
  const Matrix& data;
  std::size_t k;
  Matrix centroids;
  std::vector<GroupId> assign;
  std::vector<double> dist;  // squared distance to assigned centroid

  Lloyd(const Matrix& d, std::size_t k_) : data(d), k(k_), centroids(k_, d.cols()), assign(d.rows(), GroupId(-1)), dist(d.rows(), 0.0) {}

  // Nearest centroid for every row, ties to the lowest id. Returns whether
  // any assignment changed.
  bool assign_all() {
    const std::size_t n = data.rows();
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<char> changed(chunks, 0);
    parallel_chunks(n, kChunk, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
      for (std::size_t r = begin; r < end; ++r) {
        const auto row = data.row(r);
        GroupId best = 0;
        double best_d = sq_dist(row, centroids.row(0));
        for (std::size_t c = 1; c < k; ++c) {
          const double d = sq_dist(row, centroids.row(c));
          if (d < best_d) {
            best_d = d;
            best = static_cast<GroupId>(c);
          }
        }
        if (assign[r] != best) changed[chunk] = 1;
        assign[r] = best;
        dist[r] = best_d;
      }
    });
    return std::any_of(changed.begin(), changed.end(), [](char c) { return c != 0; });
  }

  // Moves the centroid of each empty group onto the row farthest from its
  // own centroid, then reassigns. Returns true if anything changed.
  bool repair_empty() {
    bool any = false;
    for (std::size_t guard = 0; guard <= k; ++guard) {
      std::vector<std::size_t> size(k, 0);
      for (GroupId g : assign) ++size[g];
      const auto empty = std::find(size.begin(), size.end(), std::size_t{0});
      if (empty == size.end()) return any;

      std::size_t far = data.rows();
      for (std::size_t r = 0; r < data.rows(); ++r) {
        if (size[assign[r]] < 2) continue;
        if (far == data.rows() || dist[r] > dist[far]) far = r;
      }
      if (far == data.rows() || dist[far] == 0.0) {
        throw DegenerateError(fmt::format("cannot fill {} groups: too few distinct points", k));
      }
      const auto g = static_cast<std::size_t>(empty - size.begin());
      std::copy_n(data.row(far).begin(), data.cols(), centroids.row(g).begin());
      assign_all();
      any = true;
    }
    throw DegenerateError(fmt::format("cannot fill {} groups: too few distinct points", k));
  }

  double inertia() const {
    const std::size_t n = data.rows();
    std::vector<double> partial((n + kChunk - 1) / kChunk, 0.0);
    for (std::size_t c = 0; c < partial.size(); ++c) {
      for (std::size_t r = c * kChunk; r < std::min(n, (c + 1) * kChunk); ++r) partial[c] += dist[r];
    }
    return std::accumulate(partial.begin(), partial.end(), 0.0);
  }

  // Recomputes centroids as group means; returns the largest displacement.
  double update_centroids() {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> sums(chunks);
    std::vector<std::vector<std::size_t>> counts(chunks);
    parallel_chunks(n, kChunk, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
      auto& s = sums[chunk];
      auto& cnt = counts[chunk];
      s.assign(k * d, 0.0);
      cnt.assign(k, 0);
      for (std::size_t r = begin; r < end; ++r) {
        const auto row = data.row(r);
        const std::size_t g = assign[r];
        for (std::size_t j = 0; j < d; ++j) s[g * d + j] += row[j];
        ++cnt[g];
      }
    });
    std::vector<double> total(k * d, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t c = 0; c < chunks; ++c) {
      for (std::size_t i = 0; i < total.size(); ++i) total[i] += sums[c][i];
      for (std::size_t g = 0; g < k; ++g) count[g] += counts[c][g];
    }
    double shift = 0.0;
    for (std::size_t g = 0; g < k; ++g) {
      if (count[g] == 0) continue;
      auto cen = centroids.row(g);
      double moved = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double next = total[g * d + j] / static_cast<double>(count[g]);
        moved += (next - cen[j]) * (next - cen[j]);
        cen[j] = next;
      }
      shift = std::max(shift, std::sqrt(moved));
    }
    return shift;
  }
};

void seed_centroids(Lloyd& state, std::mt19937_64& rng) {
  const Matrix& data = state.data;
  const std::size_t n = data.rows();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::size_t first = pick(rng);
  std::copy_n(data.row(first).begin(), data.cols(), state.centroids.row(0).begin());

  std::vector<double> nearest(n);
  for (std::size_t r = 0; r < n; ++r) nearest[r] = sq_dist(data.row(r), state.centroids.row(0));
  for (std::size_t c = 1; c < state.k; ++c) {
    const double total = std::accumulate(nearest.begin(), nearest.end(), 0.0);
    if (!(total > 0.0)) {
      throw DegenerateError(fmt::format("cannot seed {} groups: too few distinct points", state.k));
    }
    std::uniform_real_distribution<double> u(0.0, total);
    const double target = u(rng);
    double acc = 0.0;
    std::size_t chosen = n;
    for (std::size_t r = 0; r < n; ++r) {
      if (nearest[r] == 0.0) continue;
      acc += nearest[r];
      chosen = r;
      if (acc >= target) break;
    }
    std::copy_n(data.row(chosen).begin(), data.cols(), state.centroids.row(c).begin());
    for (std::size_t r = 0; r < n; ++r) {
      nearest[r] = std::min(nearest[r], sq_dist(data.row(r), state.centroids.row(c)));
    }
  }
}

ClusteringResult run_once(const Matrix& data, std::size_t k, const KMeansConfig& cfg, std::mt19937_64& rng) {
  Lloyd state(data, k);
  seed_centroids(state, rng);

  ClusteringResult res;
  std::size_t iter = 0;
  for (;;) {
    bool changed = state.assign_all();
    changed = state.repair_empty() || changed;
    res.inertia_trace.push_back(state.inertia());
    ++iter;
    if (!changed && iter > 1) break;
    if (iter >= cfg.max_iter) break;
    const double shift = state.update_centroids();
    if (shift < cfg.tol) {
      state.assign_all();
      state.repair_empty();
      res.inertia_trace.push_back(state.inertia());
      break;
    }
  }
  res.k = k;
  res.assign = std::move(state.assign);
  res.centroids = std::move(state.centroids);
  res.inertia = res.inertia_trace.back();
  res.iterations = iter;
  return res;
}

}  // namespace

ClusteringResult kmeans(const Matrix& mat, std::size_t k, const KMeansConfig& cfg) {
  if (k == 0) throw ConfigError("k must be at least 1");
  if (k > mat.rows()) throw ConfigError(fmt::format("k = {} exceeds the {} available points", k, mat.rows()));
  if (cfg.restarts == 0) throw ConfigError("restarts must be at least 1");
  if (cfg.max_iter == 0) throw ConfigError("max_iter must be at least 1");

  // Canonical row order: lexicographic, stable on the original index.
  std::vector<std::size_t> order(mat.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = mat.row(a);
    const auto rb = mat.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  Matrix canonical(mat.rows(), mat.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::copy_n(mat.row(order[i]).begin(), mat.cols(), canonical.row(i).begin());
  }

  std::mt19937_64 rng(cfg.seed);
  ClusteringResult best;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    auto res = run_once(canonical, k, cfg, rng);
    if (r == 0 || res.inertia < best.inertia) best = std::move(res);
  }

  std::vector<GroupId> assign(mat.rows());
  for (std::size_t i = 0; i < order.size(); ++i) assign[order[i]] = best.assign[i];
  best.assign = std::move(assign);
  return best;
}

double davies_bouldin(const Matrix& mat, const ClusteringResult& res) {
  const std::size_t k = res.k;
  if (k < 2) throw UndefinedValueError("Davies-Bouldin index needs at least two groups");
  if (res.assign.size() != mat.rows() || res.centroids.rows() != k || res.centroids.cols() != mat.cols()) {
    throw ConfigError("clustering result does not match the data shape");
  }
  std::vector<double> scatter(k, 0.0);
  std::vector<std::size_t> count(k, 0);
  for (std::size_t r = 0; r < mat.rows(); ++r) {
    const GroupId g = res.assign[r];
    scatter[g] += std::sqrt(sq_dist(mat.row(r), res.centroids.row(g)));
    ++count[g];
  }
  for (std::size_t g = 0; g < k; ++g) {
    if (count[g] == 0) throw DegenerateError(fmt::format("group {} is empty", g));
    scatter[g] /= static_cast<double>(count[g]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double d = std::sqrt(sq_dist(res.centroids.row(i), res.centroids.row(j)));
      if (d == 0.0) throw DegenerateError(fmt::format("groups {} and {} have coincident centroids", i, j));
      worst = std::max(worst, (scatter[i] + scatter[j]) / d);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

KSelection select_k(const Matrix& mat, std::size_t k_min, std::size_t k_max, const KMeansConfig& cfg) {
  if (k_min < 2 || k_min > k_max || k_max > mat.rows()) {
    throw ConfigError(fmt::format("k range [{},{}] must lie within [2,{}]", k_min, k_max, mat.rows()));
  }
  KSelection sel;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    auto res = kmeans(mat, k, cfg);
    res.db_index = davies_bouldin(mat, res);
    sel.scores.push_back({k, res.db_index, res.inertia});
    if (k == k_min || res.db_index < sel.best.db_index) sel.best = std::move(res);
  }
  return sel;
}

ClusteringResult order_groups_by_size(const ClusteringResult& res) {
  const auto sizes = res.sizes();
  std::vector<GroupId> by_size(res.k);
  std::iota(by_size.begin(), by_size.end(), GroupId{0});
  std::stable_sort(by_size.begin(), by_size.end(), [&](GroupId a, GroupId b) { return sizes[a] > sizes[b]; });
  std::vector<GroupId> relabel(res.k);
  for (std::size_t i = 0; i < by_size.size(); ++i) relabel[by_size[i]] = static_cast<GroupId>(i);

  ClusteringResult out = res;
  for (auto& g : out.assign) g = relabel[g];
  for (std::size_t old = 0; old < res.k; ++old) {
    std::copy_n(res.centroids.row(old).begin(), res.centroids.cols(), out.centroids.row(relabel[old]).begin());
  }
  return out;
}

std::string label_role(std::span<const double> centroid, const RoleLabelThresholds& t) {
  if (centroid.size() != kMeasureCount) {
    throw ConfigError(fmt::format("role labels need {} centroid coordinates, got {}", kMeasureCount, centroid.size()));
  }
  const auto at = [&](MeasureColumn c) { return centroid[c]; };
  if (std::all_of(centroid.begin(), centroid.end(), [&](double v) { return v >= t.orphan; })) {
    return "pivot orphelin";
  }
  const bool pivot = std::max(at(kIntOut), at(kIntIn)) >= t.pivot;
  const double external_min = std::min({at(kDivOut), at(kDivIn), at(kExtOut), at(kExtIn), at(kHetOut), at(kHetIn)});
  const bool connector = external_min > t.connector;
  if (pivot) return connector ? "pivot connecteur" : "pivot provincial";
  if (connector) return "non-pivot connecteur";
  if (std::all_of(centroid.begin(), centroid.end(), [](double v) { return v < 0.0; })) {
    return "non-pivot ultra-périphérique";
  }
  if (std::max(at(kDivOut), at(kDivIn)) > 0.0) {
    return at(kDivOut) >= at(kDivIn) ? "non-pivot périphérique (sortant)" : "non-pivot périphérique (entrant)";
  }
  return "non-pivot périphérique";
}

}  // namespace roleforge

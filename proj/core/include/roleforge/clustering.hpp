#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "roleforge/matrix.hpp"

namespace roleforge {

using GroupId = std::uint32_t;

struct KMeansConfig {
  std::uint64_t seed = 0;
  std::size_t max_iter = 100;
  // Stop once no centroid moves farther than this (Euclidean).
  double tol = 1e-6;
  std::size_t restarts = 10;
};

struct ClusteringResult {
  std::size_t k = 0;
  std::vector<GroupId> assign;
  Matrix centroids;  // k x d
  double inertia = 0.0;
  // Filled by select_k; NaN when the index was not computed.
  double db_index = std::numeric_limits<double>::quiet_NaN();
  std::size_t iterations = 0;
  // Inertia after every assignment step of the retained restart.
  std::vector<double> inertia_trace;

  std::vector<std::size_t> sizes() const;
};

// Column-wise centring and scaling to population sd 1. Constant columns
// become all-zero.
Matrix standardize(const Matrix& mat);

// Lloyd's algorithm from distance-squared-weighted seeding, best of
// cfg.restarts by inertia. Rows are put in a canonical (lexicographic) order
// before seeding, so permuting the input rows leaves the result unchanged.
// Throws ConfigError when k == 0 or k > rows, DegenerateError when the data
// has fewer than k distinct rows.
ClusteringResult kmeans(const Matrix& mat, std::size_t k, const KMeansConfig& cfg = {});

// Davies-Bouldin index over Euclidean scatter and centroid distance, using
// the centroids stored in `res`. Throws UndefinedValueError for k < 2 and
// DegenerateError for empty groups or coincident centroids.
double davies_bouldin(const Matrix& mat, const ClusteringResult& res);

struct KScore {
  std::size_t k = 0;
  double db_index = 0.0;
  double inertia = 0.0;
};

struct KSelection {
  ClusteringResult best;
  std::vector<KScore> scores;
};

// Runs kmeans for every k in [k_min, k_max] and keeps the lowest
// Davies-Bouldin index, ties going to the smaller k.
KSelection select_k(const Matrix& mat, std::size_t k_min, std::size_t k_max, const KMeansConfig& cfg = {});

// Relabels groups by descending size (ties by previous id).
ClusteringResult order_groups_by_size(const ClusteringResult& res);

// Heuristic cut points for naming a group from its centroid in standardized
// measure space.
struct RoleLabelThresholds {
  double pivot = 1.0;      // max internal intensity at or above => pivot
  double connector = 0.0;  // every external measure above => connector
  double orphan = 5.0;     // every measure at or above => orphan pivot
};

// Names a group from its 8 centroid coordinates (measure column order).
std::string label_role(std::span<const double> centroid, const RoleLabelThresholds& t = {});

}  // namespace roleforge

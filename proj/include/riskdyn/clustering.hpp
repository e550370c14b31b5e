#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "riskdyn/preprocess.hpp"

namespace riskdyn {

struct KMeansConfig {
  int k = 2;
  int n_restarts = 10;
  int max_iter = 300;
  double tol = 1e-6;
  std::uint64_t seed = 42;
  // Clusters are relabeled by descending centroid value in this column (column 0
  // of the indicator matrix is WRI, so cluster 0 is the higher-risk group).
  Eigen::Index order_column = 0;

  void validate() const;
};

struct ClusterModel {
  Eigen::MatrixXd centroids;  // k x d
  std::vector<int> assignments;
  double inertia = 0.0;
  int iterations_run = 0;
  bool converged = false;
  int best_restart = 0;
  // canonical_order[old_id] = new_id, as applied to the raw Lloyd result.
  std::vector<int> canonical_order;
  // Inertia after each assignment step of the selected restart.
  std::vector<double> inertia_trace;
};

/// k-means++ seeded Lloyd iterations, best of n_restarts by inertia.
/// Throws TooFewRows when rows < k.
ClusterModel kmeans_fit(const FeatureMatrix& matrix, const KMeansConfig& config = {});

/// Nearest centroid per row; ties go to the lower cluster id. Throws DimensionMismatch.
std::vector<int> assign(const ClusterModel& model, const FeatureMatrix& matrix);
std::vector<int> assign(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& points);

double inertia_of(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& points, const std::vector<int>& labels);

struct KSelectionRow {
  int k = 0;
  double silhouette = 0.0;
  double inertia = 0.0;
};

struct KSelection {
  int best_k = 0;
  std::vector<KSelectionRow> table;
};

/// Argmax-silhouette k over [k_min, k_max]; ties go to the smaller k.
KSelection select_k(const FeatureMatrix& matrix, int k_min, int k_max, const KMeansConfig& base = {});

std::string clusters_json(const ClusterModel& model, const FeatureMatrix& matrix, const KMeansConfig& config);

}  // namespace riskdyn

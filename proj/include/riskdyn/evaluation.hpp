#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace riskdyn {

// Binary confusion counts; cell c<i><j> counts true class i predicted as class j.
struct ConfusionMatrix2 {
  long c00 = 0;
  long c01 = 0;
  long c10 = 0;
  long c11 = 0;

  long total() const noexcept { return c00 + c01 + c10 + c11; }
  double accuracy() const noexcept {
    return total() == 0 ? 0.0 : static_cast<double>(c00 + c11) / static_cast<double>(total());
  }
  friend bool operator==(const ConfusionMatrix2&, const ConfusionMatrix2&) = default;
};

/// Throws LengthMismatch or NonBinary.
ConfusionMatrix2 confusion(std::span<const int> truth, std::span<const int> predicted);
inline double accuracy(const ConfusionMatrix2& cm) noexcept { return cm.accuracy(); }

/// Mann-Whitney AUC with midranks for ties. Throws OneClassOnly, LengthMismatch, NonBinary.
double auc(std::span<const double> scores, std::span<const int> truth);

// A validity index that may be undefined for degenerate geometry, in which case
// value is +infinity and degenerate is set.
struct IndexValue {
  double value = 0.0;
  bool degenerate = false;
};

/// Mean silhouette, Euclidean. Points in singleton clusters score 0.
/// Throws SingleCluster when fewer than two distinct labels are present.
double silhouette(const Eigen::MatrixXd& points, std::span<const int> labels);

/// (B / (k-1)) / (W / (n-k)). Throws SingleCluster and InvalidConfig (k > n-1).
IndexValue calinski_harabasz(const Eigen::MatrixXd& points, std::span<const int> labels);

/// Mean over clusters of max_j (s_i + s_j) / d_ij. Throws SingleCluster.
IndexValue davies_bouldin(const Eigen::MatrixXd& points, std::span<const int> labels);

struct ClusterValidityReport {
  double silhouette = 0.0;
  IndexValue calinski_harabasz;
  IndexValue davies_bouldin;
};

ClusterValidityReport cluster_validity(const Eigen::MatrixXd& points, std::span<const int> labels);

struct MetricsReport {
  std::optional<ClusterValidityReport> validity;
  std::optional<ConfusionMatrix2> confusion;
  std::optional<double> accuracy;
  std::optional<double> auc;
};

/// Keys: silhouette, calinski_harabasz, davies_bouldin, confusion (2x2, rows = true class),
/// accuracy, auc. Absent values serialize as null.
std::string metrics_json(const MetricsReport& report, int indent = 2);

}  // namespace riskdyn

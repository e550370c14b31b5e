#include "riskdyn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "json.hpp"
#include "riskdyn/error.hpp"

namespace riskdyn {

namespace {

void check_binary(std::span<const int> labels, const char* what) {
  for (int v : labels) {
    if (v != 0 && v != 1) throw Error(ErrorCode::NonBinary, std::string(what) + " contains label " + std::to_string(v));
  }
}

// Maps arbitrary integer labels onto dense ids 0..k-1 (sorted label order).
struct DenseLabels {
  std::vector<int> ids;
  int k = 0;
};

DenseLabels densify(std::span<const int> labels) {
  std::map<int, int> remap;
  for (int v : labels) remap.emplace(v, 0);
  int next = 0;
  for (auto& [label, id] : remap) id = next++;
  DenseLabels out;
  out.k = next;
  out.ids.reserve(labels.size());
  for (int v : labels) out.ids.push_back(remap.at(v));
  return out;
}

DenseLabels checked_clusters(const Eigen::MatrixXd& points, std::span<const int> labels) {
  if (static_cast<std::size_t>(points.rows()) != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "points and labels differ in length");
  }
  DenseLabels d = densify(labels);
  if (d.k < 2) throw Error(ErrorCode::SingleCluster, "need at least two clusters");
  return d;
}

struct Centroids {
  Eigen::MatrixXd means;
  std::vector<long> counts;
};

Centroids centroids_of(const Eigen::MatrixXd& points, const DenseLabels& d) {
  Centroids c{Eigen::MatrixXd::Zero(d.k, points.cols()), std::vector<long>(static_cast<std::size_t>(d.k), 0)};
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int id = d.ids[static_cast<std::size_t>(i)];
    c.means.row(id) += points.row(i);
    ++c.counts[static_cast<std::size_t>(id)];
  }
  for (int id = 0; id < d.k; ++id) c.means.row(id) /= static_cast<double>(c.counts[static_cast<std::size_t>(id)]);
  return c;
}

}  // namespace

ConfusionMatrix2 confusion(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) throw Error(ErrorCode::LengthMismatch, "confusion");
  check_binary(truth, "truth");
  check_binary(predicted, "predictions");
  ConfusionMatrix2 cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 0) {
      (predicted[i] == 0 ? cm.c00 : cm.c01) += 1;
    } else {
      (predicted[i] == 0 ? cm.c10 : cm.c11) += 1;
    }
  }
  return cm;
}

double auc(std::span<const double> scores, std::span<const int> truth) {
  if (scores.size() != truth.size()) throw Error(ErrorCode::LengthMismatch, "auc");
  check_binary(truth, "truth");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of midranks of the positives.
  double rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (truth[order[t]] == 1) rank_sum += midrank;
    }
    i = j + 1;
  }
  const auto pos = static_cast<double>(std::count(truth.begin(), truth.end(), 1));
  const double neg = static_cast<double>(n) - pos;
  if (pos == 0.0 || neg == 0.0) throw Error(ErrorCode::OneClassOnly, "auc needs both classes");
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

double silhouette(const Eigen::MatrixXd& points, std::span<const int> labels) {
  const DenseLabels d = checked_clusters(points, labels);
  const Eigen::Index n = points.rows();
  std::vector<long> sizes(static_cast<std::size_t>(d.k), 0);
  for (int id : d.ids) ++sizes[static_cast<std::size_t>(id)];

  double total = 0.0;
  std::vector<double> dist_sum(static_cast<std::size_t>(d.k));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      dist_sum[static_cast<std::size_t>(d.ids[static_cast<std::size_t>(j)])] += (points.row(i) - points.row(j)).norm();
    }
    const int own = d.ids[static_cast<std::size_t>(i)];
    const long own_size = sizes[static_cast<std::size_t>(own)];
    if (own_size < 2) continue;  // singleton scores 0
    const double a = dist_sum[static_cast<std::size_t>(own)] / static_cast<double>(own_size - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < d.k; ++c) {
      if (c == own) continue;
      b = std::min(b, dist_sum[static_cast<std::size_t>(c)] / static_cast<double>(sizes[static_cast<std::size_t>(c)]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

IndexValue calinski_harabasz(const Eigen::MatrixXd& points, std::span<const int> labels) {
  const DenseLabels d = checked_clusters(points, labels);
  const Eigen::Index n = points.rows();
  if (d.k > n - 1) throw Error(ErrorCode::InvalidConfig, "calinski_harabasz needs k <= n-1");
  const Centroids c = centroids_of(points, d);
  const Eigen::RowVectorXd overall = points.colwise().mean();

  double between = 0.0;
  for (int id = 0; id < d.k; ++id) {
    between += static_cast<double>(c.counts[static_cast<std::size_t>(id)]) * (c.means.row(id) - overall).squaredNorm();
  }
  double within = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    within += (points.row(i) - c.means.row(d.ids[static_cast<std::size_t>(i)])).squaredNorm();
  }
  if (within == 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {(between / static_cast<double>(d.k - 1)) / (within / static_cast<double>(n - d.k)), false};
}

IndexValue davies_bouldin(const Eigen::MatrixXd& points, std::span<const int> labels) {
  const DenseLabels d = checked_clusters(points, labels);
  const Centroids c = centroids_of(points, d);
  std::vector<double> scatter(static_cast<std::size_t>(d.k), 0.0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int id = d.ids[static_cast<std::size_t>(i)];
    scatter[static_cast<std::size_t>(id)] += (points.row(i) - c.means.row(id)).norm();
  }
  for (int id = 0; id < d.k; ++id) scatter[static_cast<std::size_t>(id)] /= static_cast<double>(c.counts[static_cast<std::size_t>(id)]);

  double total = 0.0;
  bool degenerate = false;
  for (int i = 0; i < d.k; ++i) {
    double worst = 0.0;
    for (int j = 0; j < d.k; ++j) {
      if (j == i) continue;
      const double sep = (c.means.row(i) - c.means.row(j)).norm();
      if (sep == 0.0) {
        degenerate = true;
        continue;
      }
      worst = std::max(worst, (scatter[static_cast<std::size_t>(i)] + scatter[static_cast<std::size_t>(j)]) / sep);
    }
    total += worst;
  }
  if (degenerate) return {std::numeric_limits<double>::infinity(), true};
  return {total / static_cast<double>(d.k), false};
}

ClusterValidityReport cluster_validity(const Eigen::MatrixXd& points, std::span<const int> labels) {
  return {silhouette(points, labels), calinski_harabasz(points, labels), davies_bouldin(points, labels)};
}

std::string metrics_json(const MetricsReport& report, int indent) {
  using nlohmann::ordered_json;
  auto index = [](const IndexValue& v) -> ordered_json {
    if (v.degenerate) return nullptr;
    return v.value;
  };
  ordered_json j;
  if (report.validity) {
    j["silhouette"] = report.validity->silhouette;
    j["calinski_harabasz"] = index(report.validity->calinski_harabasz);
    j["davies_bouldin"] = index(report.validity->davies_bouldin);
    j["calinski_harabasz_degenerate"] = report.validity->calinski_harabasz.degenerate;
    j["davies_bouldin_degenerate"] = report.validity->davies_bouldin.degenerate;
  } else {
    j["silhouette"] = nullptr;
    j["calinski_harabasz"] = nullptr;
    j["davies_bouldin"] = nullptr;
  }
  if (report.confusion) {
    const auto& cm = *report.confusion;
    j["confusion"] = ordered_json::array({ordered_json::array({cm.c00, cm.c01}), ordered_json::array({cm.c10, cm.c11})});
    j["confusion_layout"] = "rows = true class, columns = predicted class";
  } else {
    j["confusion"] = nullptr;
  }
  j["accuracy"] = report.accuracy ? ordered_json(*report.accuracy) : ordered_json(nullptr);
  j["auc"] = report.auc ? ordered_json(*report.auc) : ordered_json(nullptr);
  return j.dump(indent);
}

}  // namespace riskdyn

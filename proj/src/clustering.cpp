#include "riskdyn/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "riskdyn/error.hpp"
#include "riskdyn/evaluation.hpp"
#include "riskdyn/random.hpp"

namespace riskdyn {

void KMeansConfig::validate() const {
  if (k < 1) throw Error(ErrorCode::InvalidConfig, "k must be >= 1");
  if (n_restarts < 1) throw Error(ErrorCode::InvalidConfig, "n_restarts must be >= 1");
  if (max_iter < 1) throw Error(ErrorCode::InvalidConfig, "max_iter must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "tol must be > 0");
}

std::vector<int> assign(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& points) {
  if (points.cols() != centroids.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "points have " + std::to_string(points.cols()) +
                                                  " columns, centroids " + std::to_string(centroids.cols()));
  }
  std::vector<int> labels(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        arg = static_cast<int>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = arg;
  }
  return labels;
}

std::vector<int> assign(const ClusterModel& model, const FeatureMatrix& matrix) {
  return assign(model.centroids, matrix.values);
}

double inertia_of(const Eigen::MatrixXd& centroids, const Eigen::MatrixXd& points, const std::vector<int>& labels) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

namespace {

Eigen::MatrixXd kmeanspp_seed(const Eigen::MatrixXd& x, int k, Rng& rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers(k, x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = (x.row(i) - centers.row(0)).squaredNorm();

  for (int c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    Eigen::Index pick = 0;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[static_cast<std::size_t>(i)];
        if (acc > target && d2[static_cast<std::size_t>(i)] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.row(c) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto& d = d2[static_cast<std::size_t>(i)];
      d = std::min(d, (x.row(i) - centers.row(c)).squaredNorm());
    }
  }
  return centers;
}

struct LloydRun {
  Eigen::MatrixXd centroids;
  std::vector<int> labels;
  double inertia = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

LloydRun lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centroids, const KMeansConfig& cfg) {
  const Eigen::Index n = x.rows();
  const int k = static_cast<int>(centroids.rows());
  LloydRun run;
  for (int it = 0; it < cfg.max_iter; ++it) {
    run.labels = assign(centroids, x);
    run.trace.push_back(inertia_of(centroids, x, run.labels));
    run.iterations = it + 1;

    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = run.labels[static_cast<std::size_t>(i)];
      next.row(c) += x.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        next.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: move it onto the point farthest from its current centroid.
      Eigen::Index far = 0;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double d = (x.row(i) - centroids.row(run.labels[static_cast<std::size_t>(i)])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      next.row(c) = x.row(far);
    }
    const double shift = (next - centroids).rowwise().norm().maxCoeff();
    centroids = std::move(next);
    if (shift < cfg.tol) {
      run.converged = true;
      break;
    }
  }
  run.labels = assign(centroids, x);
  run.inertia = inertia_of(centroids, x, run.labels);
  run.trace.push_back(run.inertia);
  run.centroids = std::move(centroids);
  return run;
}

}  // namespace

ClusterModel kmeans_fit(const FeatureMatrix& matrix, const KMeansConfig& config) {
  config.validate();
  const Eigen::MatrixXd& x = matrix.values;
  if (x.rows() < config.k) {
    throw Error(ErrorCode::TooFewRows, std::to_string(x.rows()) + " rows for k=" + std::to_string(config.k));
  }
  if (config.k > 1 && (config.order_column < 0 || config.order_column >= x.cols())) {
    throw Error(ErrorCode::InvalidConfig, "order_column out of range");
  }

  LloydRun best;
  int best_restart = -1;
  for (int r = 0; r < config.n_restarts; ++r) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(r)));
    LloydRun run = lloyd(x, kmeanspp_seed(x, config.k, rng), config);
    if (best_restart < 0 || run.inertia < best.inertia) {
      best = std::move(run);
      best_restart = r;
    }
  }

  // Canonical relabeling: descending centroid value on the order column, ties by old id.
  std::vector<int> by_rank(static_cast<std::size_t>(config.k));
  std::iota(by_rank.begin(), by_rank.end(), 0);
  if (config.k > 1) {
    std::stable_sort(by_rank.begin(), by_rank.end(), [&](int a, int b) {
      return best.centroids(a, config.order_column) > best.centroids(b, config.order_column);
    });
  }
  ClusterModel model;
  model.canonical_order.assign(static_cast<std::size_t>(config.k), 0);
  model.centroids.resize(config.k, x.cols());
  for (int new_id = 0; new_id < config.k; ++new_id) {
    const int old_id = by_rank[static_cast<std::size_t>(new_id)];
    model.canonical_order[static_cast<std::size_t>(old_id)] = new_id;
    model.centroids.row(new_id) = best.centroids.row(old_id);
  }
  model.assignments = assign(model.centroids, x);
  model.inertia = inertia_of(model.centroids, x, model.assignments);
  model.iterations_run = best.iterations;
  model.converged = best.converged;
  model.best_restart = best_restart;
  model.inertia_trace = std::move(best.trace);
  return model;
}

KSelection select_k(const FeatureMatrix& matrix, int k_min, int k_max, const KMeansConfig& base) {
  if (k_min < 2 || k_max < k_min || k_max > matrix.n_rows() - 1) {
    throw Error(ErrorCode::InvalidConfig, "k range must lie within [2, rows-1]");
  }
  KSelection sel;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = k_min; k <= k_max; ++k) {
    KMeansConfig cfg = base;
    cfg.k = k;
    const ClusterModel model = kmeans_fit(matrix, cfg);
    const double s = silhouette(matrix.values, model.assignments);
    sel.table.push_back({k, s, model.inertia});
    if (s > best) {
      best = s;
      sel.best_k = k;
    }
  }
  return sel;
}

std::string clusters_json(const ClusterModel& model, const FeatureMatrix& matrix, const KMeansConfig& config) {
  nlohmann::ordered_json j;
  j["config"] = {{"k", config.k},
                 {"n_restarts", config.n_restarts},
                 {"max_iter", config.max_iter},
                 {"tol", config.tol},
                 {"seed", config.seed}};
  j["columns"] = matrix.columns;
  auto& cents = j["centroids"] = nlohmann::ordered_json::array();
  for (Eigen::Index c = 0; c < model.centroids.rows(); ++c) {
    std::vector<double> row(model.centroids.cols());
    for (Eigen::Index d = 0; d < model.centroids.cols(); ++d) row[static_cast<std::size_t>(d)] = model.centroids(c, d);
    cents.push_back(row);
  }
  j["inertia"] = model.inertia;
  j["iterations"] = model.iterations_run;
  j["converged"] = model.converged;
  j["canonical_order"] = model.canonical_order;
  auto& assignments = j["assignments"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < model.assignments.size(); ++i) {
    assignments.push_back({{"country", matrix.rows[i].country},
                           {"year", matrix.rows[i].year},
                           {"cluster", model.assignments[i]}});
  }
  return j.dump(2);
}

}  // namespace riskdyn

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "riskdyn/evaluation.hpp"
#include "riskdyn/preprocess.hpp"

namespace riskdyn {

inline constexpr int kHiddenLabel = -1;

struct SpreadConfig {
  int n_neighbors = 7;
  double alpha = 0.2;
  int max_iter = 1000;
  double tol = 1e-6;
  double hide_fraction = 0.5;
  std::uint64_t seed = 42;

  void validate() const;
};

// Symmetric binary KNN graph in adjacency-list form.
class AffinityGraph {
 public:
  struct Edge {
    int target;
    double weight;
  };

  explicit AffinityGraph(std::vector<std::vector<Edge>> adjacency);

  std::size_t size() const noexcept { return adjacency_.size(); }
  const std::vector<Edge>& neighbors(std::size_t node) const { return adjacency_[node]; }
  const Eigen::VectorXd& degree() const noexcept { return degree_; }
  double weight(std::size_t i, std::size_t j) const;

  Eigen::MatrixXd dense() const;
  /// D^-1/2 W D^-1/2 as a dense matrix (for small graphs and tests).
  Eigen::MatrixXd normalized_dense() const;
  /// Component id per node, numbered in order of first appearance.
  std::vector<int> components() const;

 private:
  std::vector<std::vector<Edge>> adjacency_;  // sorted by target
  Eigen::VectorXd degree_;
};

/// Edge (i, j) with weight 1 iff j is among i's k nearest neighbors or i among j's.
/// Distance ties go to the lower row index. Throws TooFewRows when rows <= k.
AffinityGraph build_knn_graph(const Eigen::MatrixXd& points, int n_neighbors);

/// Replaces exactly round(fraction * n) labels with kHiddenLabel, keeping at least
/// one visible label per class. Throws AllHidden when that cannot be met.
std::vector<int> hide_labels(const std::vector<int>& labels, double fraction, std::uint64_t seed);

/// As above, but only rows with eligible[i] set may be hidden.
std::vector<int> hide_labels(const std::vector<int>& labels, double fraction, std::uint64_t seed,
                             const std::vector<bool>& eligible);

struct TransductionResult {
  Eigen::MatrixXd scores;  // n x c label-spreading scores F
  std::vector<int> labels;
  int iterations_run = 0;
  bool converged = false;
  double residual = 0.0;  // max absolute change in the final iteration
  std::vector<bool> hidden_mask;

  /// Row-normalized score of the given class (0.5 when a row is all zero).
  std::vector<double> class_probability(int cls) const;
};

/// F <- alpha*S*F + (1-alpha)*Y from F = Y until the max entry change < tol.
/// Throws NoVisibleLabels. Non-convergence is reported through `converged`.
TransductionResult spread(const AffinityGraph& graph, const std::vector<int>& partial_labels,
                          const SpreadConfig& config);

struct HiddenEvaluation {
  std::size_t hidden_count = 0;
  double accuracy = 0.0;
  std::optional<ConfusionMatrix2> confusion;  // binary labels only
  std::optional<double> auc;                  // binary labels with both classes hidden
};

struct TransductionRun {
  TransductionResult result;
  HiddenEvaluation evaluation;
};

/// build_knn_graph -> hide_labels -> spread, evaluated on the hidden rows against
/// the original labels. AUC uses the row-normalized class-1 score.
TransductionRun transduce_full(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                               const SpreadConfig& config);
TransductionRun transduce_full(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                               const SpreadConfig& config, const std::vector<bool>& hide_eligible);

std::string transduction_json(const TransductionRun& run, const std::vector<RowKey>& rows,
                              const SpreadConfig& config);
std::string transduction_csv(const TransductionRun& run, const std::vector<RowKey>& rows,
                             const std::vector<int>& original_labels);

}  // namespace riskdyn

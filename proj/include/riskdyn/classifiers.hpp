#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riskdyn/data_model.hpp"
#include "riskdyn/evaluation.hpp"
#include "riskdyn/preprocess.hpp"

namespace riskdyn {

// ---------------------------------------------------------------------------
// Logistic regression

struct LogisticConfig {
  double lambda = 1.0;  // L2 penalty on weights; the bias is not penalized
  double tol = 1e-8;    // gradient-norm stopping threshold
  int max_iter = 200;
};

struct LogisticModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double lambda = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
  std::vector<double> loss_trace;  // objective after each accepted Newton step, starting at w = 0

  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

/// sum_i log(1 + exp(-s_i z_i)) + lambda/2 |w|^2, with s_i = 2 y_i - 1 and z = Xw + b.
double logistic_objective(const Eigen::VectorXd& weights, double bias, const Eigen::MatrixXd& x,
                          const std::vector<int>& y, double lambda);
/// Gradient of logistic_objective: weights first, bias last.
Eigen::VectorXd logistic_gradient(const Eigen::VectorXd& weights, double bias, const Eigen::MatrixXd& x,
                                  const std::vector<int>& y, double lambda);

/// Damped Newton. Throws OneClassOnly; NotConverged is reported through the model.
LogisticModel train_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y, const LogisticConfig& config = {});

// ---------------------------------------------------------------------------
// CART classification tree

struct TreeConfig {
  int max_depth = 0;          // 0 = unlimited
  int min_samples_split = 2;
  int max_features = 0;       // candidate features per split; 0 = all
  std::uint64_t seed = 0;     // feature subsampling
};

struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;  // go left when x[feature] <= threshold
  int left = -1;
  int right = -1;
  long count0 = 0;
  long count1 = 0;
  int depth = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  long samples() const noexcept { return count0 + count1; }
};

struct TreeModel {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int max_depth = 0;
  int min_samples_split = 2;

  int depth() const;
  std::size_t leaf_count() const;
  const TreeNode& leaf_for(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const;
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

/// Greedy CART with Gini impurity. Binary labels. Throws NonBinary.
TreeModel train_tree(const Eigen::MatrixXd& x, const std::vector<int>& y, const TreeConfig& config = {});

// ---------------------------------------------------------------------------
// Random forest

struct ForestConfig {
  int n_trees = 100;
  bool bootstrap = true;
  int max_features = -1;  // -1 = ceil(sqrt(d)), 0 = all
  int max_depth = 0;
  int min_samples_split = 2;
  std::uint64_t seed = 42;
};

struct ForestModel {
  std::vector<TreeModel> trees;
  std::vector<std::size_t> sample_sizes;
  int max_features = 0;
  std::uint64_t seed = 0;

  /// Share of trees voting class 1.
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x) const;
  /// Majority vote; an even split goes to class 0.
  std::vector<int> predict(const Eigen::MatrixXd& x) const;
};

ForestModel train_forest(const Eigen::MatrixXd& x, const std::vector<int>& y, const ForestConfig& config = {});

// ---------------------------------------------------------------------------
// Gradient-boosted trees, logistic loss

struct BoostConfig {
  int n_rounds = 100;
  double learning_rate = 0.1;
  int max_depth = 3;
  int min_samples_split = 2;
  // Leaf value sum(g) / (sum(h) + leaf_lambda) instead of the mean residual.
  bool newton_leaves = false;
  double leaf_lambda = 1.0;
};

struct RegressionNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  long samples = 0;

  bool is_leaf() const noexcept { return feature < 0; }
};

struct RegressionTree {
  std::vector<RegressionNode> nodes;
  double predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const;
};

struct BoostedModel {
  double initial_log_odds = 0.0;
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;

  /// Raw log-odds using the first `rounds` trees (all when omitted).
  Eigen::VectorXd decision_function(const Eigen::MatrixXd& x, std::optional<int> rounds = std::nullopt) const;
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& x, std::optional<int> rounds = std::nullopt) const;
  std::vector<int> predict(const Eigen::MatrixXd& x, std::optional<int> rounds = std::nullopt) const;
};

BoostedModel train_boosted(const Eigen::MatrixXd& x, const std::vector<int>& y, const BoostConfig& config = {});

// ---------------------------------------------------------------------------
// Temporal horizon experiments

enum class ModelKind { Logistic, Tree, Forest, Boosted };

inline constexpr std::array<ModelKind, 4> kModelKinds = {ModelKind::Forest, ModelKind::Tree, ModelKind::Boosted,
                                                         ModelKind::Logistic};

std::string_view model_name(ModelKind kind) noexcept;  // lr, dt, rf, gbt
std::optional<ModelKind> parse_model(std::string_view text);

struct ClassifierConfigs {
  LogisticConfig logistic;
  TreeConfig tree;
  ForestConfig forest;
  BoostConfig boosted;
};

struct ExperimentConfig {
  EncodingConfig encoding;
  ClassifierConfigs models;
  bool overlapping_five_year = false;
  std::optional<int> final_year;
};

struct HorizonResult {
  Horizon horizon = Horizon::One;
  ModelKind model = ModelKind::Logistic;
  ConfusionMatrix2 confusion;
  double accuracy = 0.0;
  std::optional<double> auc;  // absent when the test labels hold a single class
  std::size_t train_size = 0;
  std::size_t test_size = 0;
};

struct HorizonExperiment {
  HorizonResult result;
  std::vector<RowKey> test_rows;
  std::vector<int> test_truth;
  std::vector<int> test_predicted;
  std::vector<double> test_scores;
  int last_train_year = 0;
  StandardizationParams standardization;  // fitted on the training rows only
};

/// Label lookup keyed by (country, year).
using LabelTable = std::map<RowKey, int>;

/// temporal split -> encode and standardize (fit on train) -> train -> predict test.
/// Throws EmptySplit, MissingAssignment, OneClassOnly (training labels).
HorizonExperiment run_horizon_experiment(const Dataset& dataset, Horizon horizon, ModelKind kind,
                                         const LabelTable& labels, const ExperimentConfig& config = {});

/// CSV header: horizon,model,c00,c01,c10,c11,auc,accuracy
std::string horizon_results_csv(const std::vector<HorizonResult>& results);

}  // namespace riskdyn

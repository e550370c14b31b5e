#include "riskdyn/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "riskdyn/csv.hpp"
#include "riskdyn/error.hpp"
#include "riskdyn/random.hpp"

namespace riskdyn {

namespace {

__extension__ typedef __int128 Int128;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(u)) without overflow.
double softplus(double u) { return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u))); }

void check_labels(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw Error(ErrorCode::LengthMismatch, "features vs labels");
  for (int v : y) {
    if (v != 0 && v != 1) throw Error(ErrorCode::NonBinary, "label " + std::to_string(v));
  }
}

std::vector<int> threshold_half(const Eigen::VectorXd& p) {
  std::vector<int> out(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = p(i) > 0.5 ? 1 : 0;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

double logistic_objective(const Eigen::VectorXd& w, double b, const Eigen::MatrixXd& x, const std::vector<int>& y,
                          double lambda) {
  const Eigen::VectorXd z = (x * w).array() + b;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double s = y[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
    loss += softplus(-s * z(i));
  }
  return loss + 0.5 * lambda * w.squaredNorm();
}

Eigen::VectorXd logistic_gradient(const Eigen::VectorXd& w, double b, const Eigen::MatrixXd& x,
                                  const std::vector<int>& y, double lambda) {
  const Eigen::VectorXd z = (x * w).array() + b;
  Eigen::VectorXd r(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) r(i) = sigmoid(z(i)) - y[static_cast<std::size_t>(i)];
  Eigen::VectorXd g(w.size() + 1);
  g.head(w.size()) = x.transpose() * r + lambda * w;
  g(w.size()) = r.sum();
  return g;
}

Eigen::VectorXd LogisticModel::predict_proba(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd z = (x * weights).array() + bias;
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

std::vector<int> LogisticModel::predict(const Eigen::MatrixXd& x) const { return threshold_half(predict_proba(x)); }

LogisticModel train_logistic(const Eigen::MatrixXd& x, const std::vector<int>& y, const LogisticConfig& config) {
  check_labels(x, y);
  const auto pos = std::count(y.begin(), y.end(), 1);
  if (pos == 0 || pos == static_cast<long>(y.size())) throw Error(ErrorCode::OneClassOnly, "logistic regression");
  if (!(config.lambda >= 0.0)) throw Error(ErrorCode::InvalidConfig, "lambda must be >= 0");

  const Eigen::Index d = x.cols();
  LogisticModel m;
  m.lambda = config.lambda;
  m.weights = Eigen::VectorXd::Zero(d);
  double loss = logistic_objective(m.weights, m.bias, x, y, config.lambda);
  m.loss_trace.push_back(loss);

  for (int it = 0; it < config.max_iter; ++it) {
    const Eigen::VectorXd g = logistic_gradient(m.weights, m.bias, x, y, config.lambda);
    m.gradient_norm = g.norm();
    if (m.gradient_norm < config.tol) {
      m.converged = true;
      break;
    }
    const Eigen::VectorXd z = (x * m.weights).array() + m.bias;
    Eigen::VectorXd h(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double p = sigmoid(z(i));
      h(i) = p * (1.0 - p);
    }
    Eigen::MatrixXd hess(d + 1, d + 1);
    hess.topLeftCorner(d, d) = x.transpose() * h.asDiagonal() * x;
    hess.topLeftCorner(d, d).diagonal().array() += config.lambda;
    const Eigen::VectorXd xh = x.transpose() * h;
    hess.topRightCorner(d, 1) = xh;
    hess.bottomLeftCorner(1, d) = xh.transpose();
    hess(d, d) = h.sum();

    Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
    Eigen::VectorXd step = ldlt.solve(-g);
    if (ldlt.info() != Eigen::Success || !step.allFinite() || g.dot(step) >= 0.0) step = -g;

    // Armijo backtracking keeps the objective monotone.
    double t = 1.0;
    const double slope = g.dot(step);
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Eigen::VectorXd w_new = m.weights + t * step.head(d);
      const double b_new = m.bias + t * step(d);
      const double trial = logistic_objective(w_new, b_new, x, y, config.lambda);
      if (trial <= loss + 1e-4 * t * slope) {
        m.weights = w_new;
        m.bias = b_new;
        loss = trial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    m.iterations = it + 1;
    if (!accepted) break;  // at the floating-point floor
    m.loss_trace.push_back(loss);
  }
  if (!m.converged) {
    m.gradient_norm = logistic_gradient(m.weights, m.bias, x, y, config.lambda).norm();
    m.converged = m.gradient_norm < config.tol;
  }
  return m;
}

// ---------------------------------------------------------------------------

int TreeModel::depth() const {
  int out = 0;
  for (const auto& n : nodes) out = std::max(out, n.depth);
  return out;
}

std::size_t TreeModel::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [](const auto& n) { return n.is_leaf(); }));
}

const TreeNode& TreeModel::leaf_for(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  const TreeNode* node = &nodes.front();
  while (!node->is_leaf()) node = &nodes[static_cast<std::size_t>(row(node->feature) <= node->threshold ? node->left : node->right)];
  return *node;
}

Eigen::VectorXd TreeModel::predict_proba(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd p(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto& leaf = leaf_for(x.row(i));
    p(i) = leaf.samples() > 0 ? static_cast<double>(leaf.count1) / static_cast<double>(leaf.samples()) : 0.0;
  }
  return p;
}

std::vector<int> TreeModel::predict(const Eigen::MatrixXd& x) const {
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const auto& leaf = leaf_for(x.row(i));
    out[static_cast<std::size_t>(i)] = leaf.count1 > leaf.count0 ? 1 : 0;
  }
  return out;
}

namespace {

// Split quality Q = S_L / n_L + S_R / n_R with S = c0^2 + c1^2. Minimizing the
// weighted Gini impurity is maximizing Q; compared exactly as fractions.
struct SplitScore {
  Int128 num = 0;
  Int128 den = 1;
};

SplitScore score_of(long l0, long l1, long r0, long r1) {
  const Int128 nl = l0 + l1;
  const Int128 nr = r0 + r1;
  const Int128 sl = Int128(l0) * l0 + Int128(l1) * l1;
  const Int128 sr = Int128(r0) * r0 + Int128(r1) * r1;
  return {sl * nr + sr * nl, nl * nr};
}

bool better(const SplitScore& a, const SplitScore& b) { return a.num * b.den > b.num * a.den; }

class TreeBuilder {
 public:
  TreeBuilder(const Eigen::MatrixXd& x, const std::vector<int>& y, const TreeConfig& cfg)
      : x_(x), y_(y), cfg_(cfg), rng_(cfg.seed) {}

  TreeModel build(std::vector<std::size_t> samples) {
    TreeModel model;
    model.max_depth = cfg_.max_depth;
    model.min_samples_split = cfg_.min_samples_split;
    grow(model, samples, 0);
    return model;
  }

 private:
  int grow(TreeModel& model, std::vector<std::size_t>& samples, int depth) {
    const int id = static_cast<int>(model.nodes.size());
    model.nodes.emplace_back();
    long c0 = 0;
    long c1 = 0;
    for (std::size_t s : samples) (y_[s] == 1 ? c1 : c0) += 1;
    {
      auto& node = model.nodes.back();
      node.count0 = c0;
      node.count1 = c1;
      node.depth = depth;
    }
    const long n = c0 + c1;
    if (c0 == 0 || c1 == 0 || n < cfg_.min_samples_split || (cfg_.max_depth > 0 && depth >= cfg_.max_depth)) {
      return id;
    }

    const auto d = static_cast<int>(x_.cols());
    std::vector<int> features(static_cast<std::size_t>(d));
    std::iota(features.begin(), features.end(), 0);
    if (cfg_.max_features > 0 && cfg_.max_features < d) {
      for (int i = 0; i < cfg_.max_features; ++i) {
        const int j = i + static_cast<int>(rng_.below(static_cast<std::uint64_t>(d - i)));
        std::swap(features[static_cast<std::size_t>(i)], features[static_cast<std::size_t>(j)]);
      }
      features.resize(static_cast<std::size_t>(cfg_.max_features));
      std::sort(features.begin(), features.end());
    }

    // Any impure node splits on its best candidate, even at zero impurity decrease.
    SplitScore best{-1, 1};
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> order = samples;
    for (int f : features) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = x_(static_cast<Eigen::Index>(a), f);
        const double vb = x_(static_cast<Eigen::Index>(b), f);
        return va < vb || (va == vb && a < b);
      });
      long l0 = 0;
      long l1 = 0;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        (y_[order[i]] == 1 ? l1 : l0) += 1;
        const double v = x_(static_cast<Eigen::Index>(order[i]), f);
        const double next = x_(static_cast<Eigen::Index>(order[i + 1]), f);
        if (v == next) continue;
        const SplitScore s = score_of(l0, l1, c0 - l0, c1 - l1);
        if (better(s, best)) {
          best = s;
          best_feature = f;
          best_threshold = v + (next - v) / 2.0;
          if (best_threshold >= next) best_threshold = v;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t s : samples) {
      (x_(static_cast<Eigen::Index>(s), best_feature) <= best_threshold ? left : right).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();
    const int l = grow(model, left, depth + 1);
    const int r = grow(model, right, depth + 1);
    auto& node = model.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  const Eigen::MatrixXd& x_;
  const std::vector<int>& y_;
  TreeConfig cfg_;
  Rng rng_;
};

TreeModel grow_tree(const Eigen::MatrixXd& x, const std::vector<int>& y, const TreeConfig& cfg,
                    std::vector<std::size_t> samples) {
  TreeBuilder builder(x, y, cfg);
  return builder.build(std::move(samples));
}

}  // namespace

TreeModel train_tree(const Eigen::MatrixXd& x, const std::vector<int>& y, const TreeConfig& config) {
  check_labels(x, y);
  if (y.empty()) throw Error(ErrorCode::TooFewRows, "empty training set");
  std::vector<std::size_t> all(y.size());
  std::iota(all.begin(), all.end(), 0);
  return grow_tree(x, y, config, std::move(all));
}

// ---------------------------------------------------------------------------

Eigen::VectorXd ForestModel::predict_proba(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd votes = Eigen::VectorXd::Zero(x.rows());
  for (const auto& tree : trees) {
    const auto pred = tree.predict(x);
    for (Eigen::Index i = 0; i < x.rows(); ++i) votes(i) += pred[static_cast<std::size_t>(i)];
  }
  return trees.empty() ? votes : Eigen::VectorXd(votes / static_cast<double>(trees.size()));
}

std::vector<int> ForestModel::predict(const Eigen::MatrixXd& x) const { return threshold_half(predict_proba(x)); }

ForestModel train_forest(const Eigen::MatrixXd& x, const std::vector<int>& y, const ForestConfig& config) {
  check_labels(x, y);
  if (y.empty()) throw Error(ErrorCode::TooFewRows, "empty training set");
  if (config.n_trees < 1) throw Error(ErrorCode::InvalidConfig, "n_trees must be >= 1");
  const auto d = static_cast<int>(x.cols());
  ForestModel forest;
  forest.seed = config.seed;
  forest.max_features = config.max_features < 0 ? static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d))))
                                                 : config.max_features;
  const std::size_t n = y.size();
  for (int t = 0; t < config.n_trees; ++t) {
    const std::uint64_t tree_seed = derive_seed(config.seed, static_cast<std::uint64_t>(t));
    Rng rng(tree_seed);
    std::vector<std::size_t> sample(n);
    if (config.bootstrap) {
      for (auto& s : sample) s = static_cast<std::size_t>(rng.below(n));
    } else {
      std::iota(sample.begin(), sample.end(), 0);
    }
    TreeConfig tc;
    tc.max_depth = config.max_depth;
    tc.min_samples_split = config.min_samples_split;
    tc.max_features = forest.max_features;
    tc.seed = rng.next();
    forest.sample_sizes.push_back(sample.size());
    forest.trees.push_back(grow_tree(x, y, tc, std::move(sample)));
  }
  return forest;
}

// ---------------------------------------------------------------------------

double RegressionTree::predict(const Eigen::Ref<const Eigen::RowVectorXd>& row) const {
  const RegressionNode* node = &nodes.front();
  while (!node->is_leaf()) node = &nodes[static_cast<std::size_t>(row(node->feature) <= node->threshold ? node->left : node->right)];
  return node->value;
}

namespace {

class RegressionBuilder {
 public:
  RegressionBuilder(const Eigen::MatrixXd& x, const Eigen::VectorXd& g, const Eigen::VectorXd& h,
                    const BoostConfig& cfg)
      : x_(x), g_(g), h_(h), cfg_(cfg) {}

  RegressionTree build() {
    RegressionTree tree;
    std::vector<std::size_t> all(static_cast<std::size_t>(x_.rows()));
    std::iota(all.begin(), all.end(), 0);
    grow(tree, all, 0);
    return tree;
  }

 private:
  int grow(RegressionTree& tree, std::vector<std::size_t>& samples, int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    double gs = 0.0;
    double hs = 0.0;
    for (std::size_t s : samples) {
      gs += g_(static_cast<Eigen::Index>(s));
      hs += h_(static_cast<Eigen::Index>(s));
    }
    const auto n = static_cast<double>(samples.size());
    {
      auto& node = tree.nodes.back();
      node.samples = static_cast<long>(samples.size());
      node.value = cfg_.newton_leaves ? gs / (hs + cfg_.leaf_lambda) : gs / n;
    }
    if (depth >= cfg_.max_depth || static_cast<long>(samples.size()) < cfg_.min_samples_split) return id;

    // Variance reduction: maximize G_L^2/n_L + G_R^2/n_R - G^2/n.
    const double parent = gs * gs / n;
    const double eps = 1e-12 * std::max(1.0, std::abs(parent));
    double best_gain = eps;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> order = samples;
    for (Eigen::Index f = 0; f < x_.cols(); ++f) {
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double va = x_(static_cast<Eigen::Index>(a), f);
        const double vb = x_(static_cast<Eigen::Index>(b), f);
        return va < vb || (va == vb && a < b);
      });
      double gl = 0.0;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        gl += g_(static_cast<Eigen::Index>(order[i]));
        const double v = x_(static_cast<Eigen::Index>(order[i]), f);
        const double next = x_(static_cast<Eigen::Index>(order[i + 1]), f);
        if (v == next) continue;
        const auto nl = static_cast<double>(i + 1);
        const double nr = n - nl;
        const double gr = gs - gl;
        const double gain = gl * gl / nl + gr * gr / nr - parent;
        if (gain > best_gain + eps) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = v + (next - v) / 2.0;
          if (best_threshold >= next) best_threshold = v;
        }
      }
    }
    if (best_feature < 0) return id;
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (std::size_t s : samples) {
      (x_(static_cast<Eigen::Index>(s), best_feature) <= best_threshold ? left : right).push_back(s);
    }
    const int l = grow(tree, left, depth + 1);
    const int r = grow(tree, right, depth + 1);
    auto& node = tree.nodes[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return id;
  }

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& g_;
  const Eigen::VectorXd& h_;
  BoostConfig cfg_;
};

}  // namespace

Eigen::VectorXd BoostedModel::decision_function(const Eigen::MatrixXd& x, std::optional<int> rounds) const {
  const auto use = static_cast<std::size_t>(std::clamp(rounds.value_or(static_cast<int>(trees.size())), 0,
                                                       static_cast<int>(trees.size())));
  Eigen::VectorXd f = Eigen::VectorXd::Constant(x.rows(), initial_log_odds);
  for (std::size_t t = 0; t < use; ++t) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) f(i) += learning_rate * trees[t].predict(x.row(i));
  }
  return f;
}

Eigen::VectorXd BoostedModel::predict_proba(const Eigen::MatrixXd& x, std::optional<int> rounds) const {
  return decision_function(x, rounds).unaryExpr([](double v) { return sigmoid(v); });
}

std::vector<int> BoostedModel::predict(const Eigen::MatrixXd& x, std::optional<int> rounds) const {
  return threshold_half(predict_proba(x, rounds));
}

BoostedModel train_boosted(const Eigen::MatrixXd& x, const std::vector<int>& y, const BoostConfig& config) {
  check_labels(x, y);
  if (y.empty()) throw Error(ErrorCode::TooFewRows, "empty training set");
  if (config.n_rounds < 0 || config.max_depth < 1 || !(config.learning_rate > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "boosting configuration");
  }
  const auto n = static_cast<Eigen::Index>(y.size());
  const double pos = static_cast<double>(std::count(y.begin(), y.end(), 1));
  // Clamp so a single-class training set still yields a finite model.
  const double rate = std::clamp(pos / static_cast<double>(n), 1e-12, 1.0 - 1e-12);

  BoostedModel model;
  model.learning_rate = config.learning_rate;
  model.initial_log_odds = std::log(rate / (1.0 - rate));
  Eigen::VectorXd f = Eigen::VectorXd::Constant(n, model.initial_log_odds);
  Eigen::VectorXd g(n);
  Eigen::VectorXd h(n);
  for (int round = 0; round < config.n_rounds; ++round) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = sigmoid(f(i));
      g(i) = y[static_cast<std::size_t>(i)] - p;
      h(i) = p * (1.0 - p);
    }
    RegressionBuilder builder(x, g, h, config);
    model.trees.push_back(builder.build());
    const auto& tree = model.trees.back();
    for (Eigen::Index i = 0; i < n; ++i) f(i) += config.learning_rate * tree.predict(x.row(i));
  }
  return model;
}

// ---------------------------------------------------------------------------

std::string_view model_name(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Logistic: return "lr";
    case ModelKind::Tree: return "dt";
    case ModelKind::Forest: return "rf";
    case ModelKind::Boosted: return "gbt";
  }
  return "";
}

std::optional<ModelKind> parse_model(std::string_view text) {
  if (text == "lr") return ModelKind::Logistic;
  if (text == "dt") return ModelKind::Tree;
  if (text == "rf") return ModelKind::Forest;
  if (text == "gbt" || text == "xgb") return ModelKind::Boosted;
  return std::nullopt;
}

namespace {

std::vector<int> lookup_labels(const Dataset& data, const LabelTable& labels) {
  std::vector<int> out;
  out.reserve(data.size());
  for (const auto& r : data.records()) {
    const auto it = labels.find({r.country, r.year});
    if (it == labels.end()) {
      throw Error(ErrorCode::MissingAssignment, "(" + r.country + ", " + std::to_string(r.year) + ")");
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

HorizonExperiment run_horizon_experiment(const Dataset& dataset, Horizon horizon, ModelKind kind,
                                         const LabelTable& labels, const ExperimentConfig& config) {
  SplitSpec spec;
  spec.horizon = horizon;
  spec.final_year = config.final_year;
  spec.overlapping_five_year = config.overlapping_five_year;
  const Split split = temporal_split(dataset, spec);

  const std::vector<int> y_train = lookup_labels(split.train, labels);
  const std::vector<int> y_test = lookup_labels(split.test, labels);

  const FeatureEncoder encoder = FeatureEncoder::fit(split.train, config.encoding);
  Standardized train = standardize_columns(encoder.transform(split.train), encoder.numeric_columns());
  const FeatureMatrix test = train.params.apply(encoder.transform(split.test));

  Eigen::VectorXd scores;
  std::vector<int> predicted;
  switch (kind) {
    case ModelKind::Logistic: {
      const auto m = train_logistic(train.matrix.values, y_train, config.models.logistic);
      scores = m.predict_proba(test.values);
      predicted = m.predict(test.values);
      break;
    }
    case ModelKind::Tree: {
      const auto m = train_tree(train.matrix.values, y_train, config.models.tree);
      scores = m.predict_proba(test.values);
      predicted = m.predict(test.values);
      break;
    }
    case ModelKind::Forest: {
      const auto m = train_forest(train.matrix.values, y_train, config.models.forest);
      scores = m.predict_proba(test.values);
      predicted = m.predict(test.values);
      break;
    }
    case ModelKind::Boosted: {
      const auto m = train_boosted(train.matrix.values, y_train, config.models.boosted);
      scores = m.predict_proba(test.values);
      predicted = m.predict(test.values);
      break;
    }
  }

  HorizonExperiment exp;
  exp.test_rows = test.rows;
  exp.test_truth = y_test;
  exp.test_predicted = predicted;
  exp.test_scores.assign(scores.data(), scores.data() + scores.size());
  exp.last_train_year = split.train.years().back();
  exp.standardization = train.params;

  auto& r = exp.result;
  r.horizon = horizon;
  r.model = kind;
  r.confusion = confusion(y_test, predicted);
  r.accuracy = r.confusion.accuracy();
  const auto pos = std::count(y_test.begin(), y_test.end(), 1);
  if (pos > 0 && pos < static_cast<long>(y_test.size())) r.auc = auc(exp.test_scores, y_test);
  r.train_size = split.train.size();
  r.test_size = split.test.size();
  return exp;
}

std::string horizon_results_csv(const std::vector<HorizonResult>& results) {
  std::ostringstream out;
  out << "horizon,model,c00,c01,c10,c11,auc,accuracy\n";
  for (const auto& r : results) {
    out << horizon_name(r.horizon) << ',' << model_name(r.model) << ',' << r.confusion.c00 << ',' << r.confusion.c01
        << ',' << r.confusion.c10 << ',' << r.confusion.c11 << ',' << (r.auc ? csv::format_fixed(*r.auc, 6) : "")
        << ',' << csv::format_fixed(r.accuracy, 6) << '\n';
  }
  return out.str();
}

}  // namespace riskdyn

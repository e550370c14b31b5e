#include "riskdyn/label_spreading.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "riskdyn/csv.hpp"
#include "riskdyn/error.hpp"
#include "riskdyn/random.hpp"

namespace riskdyn {

void SpreadConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidConfig, "alpha must lie in (0, 1)");
  if (n_neighbors < 1) throw Error(ErrorCode::InvalidConfig, "n_neighbors must be >= 1");
  if (!(hide_fraction >= 0.0 && hide_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "hide_fraction must lie in [0, 1)");
  }
  if (max_iter < 1) throw Error(ErrorCode::InvalidConfig, "max_iter must be >= 1");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidConfig, "tol must be > 0");
}

AffinityGraph::AffinityGraph(std::vector<std::vector<Edge>> adjacency) : adjacency_(std::move(adjacency)) {
  degree_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(adjacency_.size()));
  for (std::size_t i = 0; i < adjacency_.size(); ++i) {
    auto& edges = adjacency_[i];
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.target < b.target; });
    for (const auto& e : edges) degree_(static_cast<Eigen::Index>(i)) += e.weight;
  }
}

double AffinityGraph::weight(std::size_t i, std::size_t j) const {
  const auto& edges = adjacency_[i];
  const auto it = std::lower_bound(edges.begin(), edges.end(), static_cast<int>(j),
                                   [](const Edge& e, int t) { return e.target < t; });
  return it != edges.end() && it->target == static_cast<int>(j) ? it->weight : 0.0;
}

Eigen::MatrixXd AffinityGraph::dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < size(); ++i) {
    for (const auto& e : adjacency_[i]) w(static_cast<Eigen::Index>(i), e.target) = e.weight;
  }
  return w;
}

Eigen::MatrixXd AffinityGraph::normalized_dense() const {
  const Eigen::VectorXd inv_sqrt = degree_.array().rsqrt();
  return inv_sqrt.asDiagonal() * dense() * inv_sqrt.asDiagonal();
}

std::vector<int> AffinityGraph::components() const {
  std::vector<int> comp(size(), -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < size(); ++start) {
    if (comp[start] >= 0) continue;
    comp[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const auto& e : adjacency_[u]) {
        const auto v = static_cast<std::size_t>(e.target);
        if (comp[v] < 0) {
          comp[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

AffinityGraph build_knn_graph(const Eigen::MatrixXd& points, int n_neighbors) {
  const Eigen::Index n = points.rows();
  if (n_neighbors < 1) throw Error(ErrorCode::InvalidConfig, "n_neighbors must be >= 1");
  if (n <= n_neighbors) {
    throw Error(ErrorCode::TooFewRows, std::to_string(n) + " rows for " + std::to_string(n_neighbors) + " neighbors");
  }
  const auto k = static_cast<std::size_t>(n_neighbors);
  std::vector<std::set<int>> links(static_cast<std::size_t>(n));
  std::vector<std::pair<double, int>> cand(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t t = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      cand[t++] = {(points.row(i) - points.row(j)).squaredNorm(), static_cast<int>(j)};
    }
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    for (std::size_t r = 0; r < k; ++r) {
      const int j = cand[r].second;
      links[static_cast<std::size_t>(i)].insert(j);
      links[static_cast<std::size_t>(j)].insert(static_cast<int>(i));
    }
  }
  std::vector<std::vector<AffinityGraph::Edge>> adjacency(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < links.size(); ++i) {
    for (int j : links[i]) adjacency[i].push_back({j, 1.0});
  }
  return AffinityGraph(std::move(adjacency));
}

std::vector<int> hide_labels(const std::vector<int>& labels, double fraction, std::uint64_t seed,
                             const std::vector<bool>& eligible) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw Error(ErrorCode::InvalidConfig, "hide fraction must lie in [0, 1)");
  if (eligible.size() != labels.size()) throw Error(ErrorCode::LengthMismatch, "hide_labels eligibility mask");

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (eligible[i] && labels[i] != kHiddenLabel) candidates.push_back(i);
  }
  const auto m = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(candidates.size())));
  if (m == 0) return labels;

  // Feasibility: a class whose members are all candidates needs one of them spared.
  std::set<int> classes;
  std::set<int> pinned;  // classes with a member that can never be hidden
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kHiddenLabel) continue;
    classes.insert(labels[i]);
    if (!eligible[i]) pinned.insert(labels[i]);
  }
  const std::size_t must_keep = classes.size() - pinned.size();
  if (m + must_keep > candidates.size()) {
    throw Error(ErrorCode::AllHidden, "cannot hide " + std::to_string(m) + " labels and keep every class visible");
  }

  Rng rng(seed);
  constexpr int kMaxDraws = 1000;
  for (int draw = 0; draw < kMaxDraws; ++draw) {
    std::vector<std::size_t> pool = candidates;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    std::vector<int> out = labels;
    for (std::size_t i = 0; i < m; ++i) out[pool[i]] = kHiddenLabel;
    std::set<int> visible;
    for (int v : out) {
      if (v != kHiddenLabel) visible.insert(v);
    }
    if (visible == classes) return out;
  }
  throw Error(ErrorCode::AllHidden, "no draw kept every class visible");
}

std::vector<int> hide_labels(const std::vector<int>& labels, double fraction, std::uint64_t seed) {
  return hide_labels(labels, fraction, seed, std::vector<bool>(labels.size(), true));
}

std::vector<double> TransductionResult::class_probability(int cls) const {
  std::vector<double> out(static_cast<std::size_t>(scores.rows()), 0.5);
  if (cls < 0 || cls >= scores.cols()) return out;
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const double total = scores.row(i).sum();
    if (total > 0.0) out[static_cast<std::size_t>(i)] = scores(i, cls) / total;
  }
  return out;
}

TransductionResult spread(const AffinityGraph& graph, const std::vector<int>& partial_labels,
                          const SpreadConfig& config) {
  config.validate();
  const std::size_t n = graph.size();
  if (partial_labels.size() != n) throw Error(ErrorCode::LengthMismatch, "labels vs graph size");
  int n_classes = 0;
  for (int v : partial_labels) {
    if (v < kHiddenLabel) throw Error(ErrorCode::InvalidConfig, "negative class label " + std::to_string(v));
    n_classes = std::max(n_classes, v + 1);
  }
  if (n_classes == 0) throw Error(ErrorCode::NoVisibleLabels, "every label is hidden");

  const auto rows = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(rows, n_classes);
  TransductionResult res;
  res.hidden_mask.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    res.hidden_mask[i] = partial_labels[i] == kHiddenLabel;
    if (!res.hidden_mask[i]) y(static_cast<Eigen::Index>(i), partial_labels[i]) = 1.0;
  }

  // Hops from the labeled set to the farthest reachable node; scores are zero there until then.
  int reach = 0;
  {
    std::vector<int> depth(n, -1);
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < n; ++i) {
      if (!res.hidden_mask[i]) {
        depth[i] = 0;
        frontier.push_back(i);
      }
    }
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const std::size_t u = frontier[head];
      for (const auto& e : graph.neighbors(u)) {
        const auto v = static_cast<std::size_t>(e.target);
        if (depth[v] < 0) {
          depth[v] = depth[u] + 1;
          reach = std::max(reach, depth[v]);
          frontier.push_back(v);
        }
      }
    }
  }

  const Eigen::VectorXd inv_sqrt = graph.degree().array().rsqrt();
  Eigen::MatrixXd f = y;
  Eigen::MatrixXd next(rows, n_classes);
  for (int it = 1; it <= config.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(n_classes);
      for (const auto& e : graph.neighbors(i)) acc += (e.weight * inv_sqrt(e.target)) * f.row(e.target);
      next.row(r) = config.alpha * inv_sqrt(r) * acc + (1.0 - config.alpha) * y.row(r);
    }
    res.residual = (next - f).cwiseAbs().maxCoeff();
    f.swap(next);
    res.iterations_run = it;
    if (res.residual < config.tol && it >= reach) {
      res.converged = true;
      break;
    }
  }

  res.labels.resize(n);
  for (Eigen::Index i = 0; i < rows; ++i) {
    Eigen::Index arg = 0;
    for (Eigen::Index c = 1; c < n_classes; ++c) {
      if (f(i, c) > f(i, arg)) arg = c;
    }
    res.labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
  }
  res.scores = std::move(f);
  return res;
}

TransductionRun transduce_full(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                               const SpreadConfig& config, const std::vector<bool>& hide_eligible) {
  config.validate();
  if (static_cast<std::size_t>(points.rows()) != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "points vs labels");
  }
  const AffinityGraph graph = build_knn_graph(points, config.n_neighbors);
  const std::vector<int> partial = hide_labels(labels, config.hide_fraction, config.seed, hide_eligible);

  TransductionRun run{spread(graph, partial, config), {}};
  std::vector<int> truth;
  std::vector<int> predicted;
  std::vector<double> score;
  const std::vector<double> p1 = run.result.class_probability(1);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!run.result.hidden_mask[i]) continue;
    truth.push_back(labels[i]);
    predicted.push_back(run.result.labels[i]);
    score.push_back(p1[i]);
  }
  auto& ev = run.evaluation;
  ev.hidden_count = truth.size();
  if (!truth.empty()) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i] ? 1 : 0;
    ev.accuracy = static_cast<double>(hits) / static_cast<double>(truth.size());
  }
  const bool binary = std::all_of(labels.begin(), labels.end(), [](int v) { return v == 0 || v == 1; }) &&
                      run.result.scores.cols() <= 2;
  if (binary && !truth.empty()) {
    ev.confusion = confusion(truth, predicted);
    const bool both = std::count(truth.begin(), truth.end(), 1) > 0 && std::count(truth.begin(), truth.end(), 0) > 0;
    if (both) ev.auc = auc(score, truth);
  }
  return run;
}

TransductionRun transduce_full(const Eigen::MatrixXd& points, const std::vector<int>& labels,
                               const SpreadConfig& config) {
  return transduce_full(points, labels, config, std::vector<bool>(labels.size(), true));
}

std::string transduction_json(const TransductionRun& run, const std::vector<RowKey>& rows,
                              const SpreadConfig& config) {
  using nlohmann::ordered_json;
  const auto& r = run.result;
  ordered_json j;
  j["config"] = {{"n_neighbors", config.n_neighbors}, {"alpha", config.alpha},
                 {"max_iter", config.max_iter},       {"tol", config.tol},
                 {"hide_fraction", config.hide_fraction}, {"seed", config.seed}};
  j["converged"] = r.converged;
  j["iterations"] = r.iterations_run;
  j["residual"] = r.residual;
  j["hidden_count"] = run.evaluation.hidden_count;
  j["hidden_accuracy"] = run.evaluation.accuracy;
  if (run.evaluation.confusion) {
    const auto& cm = *run.evaluation.confusion;
    j["hidden_confusion"] = ordered_json::array({ordered_json::array({cm.c00, cm.c01}), ordered_json::array({cm.c10, cm.c11})});
  }
  j["hidden_auc"] = run.evaluation.auc ? ordered_json(*run.evaluation.auc) : ordered_json(nullptr);
  j["labels"] = r.labels;
  std::vector<int> mask(r.hidden_mask.begin(), r.hidden_mask.end());
  j["hidden_mask"] = mask;
  auto& out = j["rows"] = ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back({{"country", rows[i].country}, {"year", rows[i].year}, {"label", r.labels[i]}, {"hidden", mask[i] != 0}});
  }
  return j.dump(2);
}

std::string transduction_csv(const TransductionRun& run, const std::vector<RowKey>& rows,
                             const std::vector<int>& original_labels) {
  const auto& r = run.result;
  std::ostringstream out;
  out << "country,year,original,label,hidden";
  for (Eigen::Index c = 0; c < r.scores.cols(); ++c) out << ",score_" << c;
  out << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> f = {rows[i].country, std::to_string(rows[i].year), std::to_string(original_labels[i]),
                                  std::to_string(r.labels[i]), r.hidden_mask[i] ? "1" : "0"};
    for (Eigen::Index c = 0; c < r.scores.cols(); ++c) {
      f.push_back(csv::format_fixed(r.scores(static_cast<Eigen::Index>(i), c), 9));
    }
    out << csv::join_row(f) << '\n';
  }
  return out.str();
}

}  // namespace riskdyn

#include <algorithm>

#include "doctest.h"
#include "oracles.hpp"
#include "riskdyn/label_spreading.hpp"
#include "support.hpp"

using namespace riskdyn;
using riskdyn::test::error_code_of;

TEST_SUITE("knn_graph") {
  TEST_CASE("middle of three collinear points links to both ends") {
    Eigen::MatrixXd p(3, 1);
    p << 0, 1, 2;
    const AffinityGraph g = build_knn_graph(p, 1);
    CHECK(g.weight(1, 0) == 1.0);
    CHECK(g.weight(1, 2) == 1.0);
    CHECK(g.weight(0, 2) == 0.0);
    CHECK(g.degree()(1) == 2.0);
  }

  TEST_CASE("two far blobs form two components") {
    Rng rng(6);
    Eigen::MatrixXd p = riskdyn::test::random_matrix(rng, 30, 2);
    p.bottomRows(15).array() += 1000.0;
    const AffinityGraph g = build_knn_graph(p, 3);
    const auto comp = g.components();
    CHECK(*std::max_element(comp.begin(), comp.end()) == 1);
    for (int i = 0; i < 15; ++i) CHECK(comp[static_cast<std::size_t>(i)] == 0);
    for (int i = 15; i < 30; ++i) CHECK(comp[static_cast<std::size_t>(i)] == 1);
  }

  TEST_CASE("weight matrix is exactly symmetric") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXd p = riskdyn::test::random_matrix(rng, 25, 3);
      const Eigen::MatrixXd w = build_knn_graph(p, 4).dense();
      CHECK((w.array() == w.transpose().array()).all());
      CHECK(w.diagonal().isZero());
    }
  }

  TEST_CASE("too few rows") {
    CHECK(error_code_of([] { build_knn_graph(Eigen::MatrixXd::Zero(3, 2), 3); }) == ErrorCode::TooFewRows);
  }
}

TEST_SUITE("hide_labels") {
  TEST_CASE("fraction zero is the identity") {
    const std::vector<int> y = {0, 1, 1, 0, 1};
    CHECK(hide_labels(y, 0.0, 1) == y);
  }

  TEST_CASE("exact hidden count, determinism, and one visible label per class") {
    const std::vector<int> y = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const auto a = hide_labels(y, 0.5, 77);
    CHECK(std::count(a.begin(), a.end(), kHiddenLabel) == 5);
    CHECK(a == hide_labels(y, 0.5, 77));
    CHECK(std::count(a.begin(), a.end(), 0) >= 1);
    CHECK(std::count(a.begin(), a.end(), 1) >= 1);
    for (std::size_t i = 0; i < y.size(); ++i) CHECK((a[i] == kHiddenLabel || a[i] == y[i]));
  }

  TEST_CASE("eligibility mask restricts hiding") {
    const std::vector<int> y = {0, 1, 0, 1, 0, 1};
    const std::vector<bool> eligible = {true, true, true, false, false, false};
    const auto a = hide_labels(y, 0.5, 5, eligible);
    for (std::size_t i = 3; i < 6; ++i) CHECK(a[i] == y[i]);
  }

  TEST_CASE("hiding everything fails") {
    CHECK(error_code_of([] { hide_labels({0, 1}, 0.9, 3); }) == ErrorCode::AllHidden);
    CHECK(error_code_of([] { hide_labels({0, 1}, 1.0, 3); }) == ErrorCode::InvalidConfig);
  }
}

TEST_SUITE("spread") {
  TEST_CASE("two-node graph passes the only label across") {
    AffinityGraph g({{{1, 1.0}}, {{0, 1.0}}});
    const auto r = spread(g, {1, kHiddenLabel}, {});
    CHECK(r.labels == std::vector<int>{1, 1});
    CHECK(r.converged);
  }

  TEST_CASE("matches the dense closed-form fixed point") {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 10 + static_cast<int>(rng.below(41));
      const Eigen::MatrixXd p = riskdyn::test::random_matrix(rng, n, 3);
      const AffinityGraph g = build_knn_graph(p, 4);
      std::vector<int> y(static_cast<std::size_t>(n));
      for (int& v : y) v = static_cast<int>(rng.below(2));
      y[0] = 0;
      y[1] = 1;
      const auto partial = hide_labels(y, 0.5, rng.next());
      SpreadConfig cfg;
      const auto r = spread(g, partial, cfg);
      Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(n, 2);
      for (int i = 0; i < n; ++i) {
        if (partial[static_cast<std::size_t>(i)] >= 0) onehot(i, partial[static_cast<std::size_t>(i)]) = 1.0;
      }
      const Eigen::MatrixXd expected = oracle::spreading_fixed_point(g.dense(), onehot, cfg.alpha);
      CHECK((r.scores - expected).cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  TEST_CASE("labels stay inside their component") {
    Eigen::MatrixXd p(8, 1);
    p << 0, 1, 2, 3, 100, 101, 102, 103;
    const AffinityGraph g = build_knn_graph(p, 1);
    const auto r = spread(g, {0, kHiddenLabel, kHiddenLabel, kHiddenLabel, kHiddenLabel, kHiddenLabel, 1, kHiddenLabel}, {});
    CHECK(r.labels == std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1});
  }

  TEST_CASE("long chain reaches the far end before stopping") {
    const int n = 40;
    std::vector<std::vector<AffinityGraph::Edge>> adj(static_cast<std::size_t>(n));
    for (int i = 0; i + 1 < n; ++i) {
      adj[static_cast<std::size_t>(i)].push_back({i + 1, 1.0});
      adj[static_cast<std::size_t>(i + 1)].insert(adj[static_cast<std::size_t>(i + 1)].begin(), {i, 1.0});
    }
    std::vector<int> partial(static_cast<std::size_t>(n), kHiddenLabel);
    partial[0] = 1;
    const auto r = spread(AffinityGraph(adj), partial, {});
    CHECK(r.converged);
    CHECK(r.iterations_run >= n - 1);
    CHECK(r.scores(n - 1, 1) > 0.0);
    CHECK(r.labels == std::vector<int>(static_cast<std::size_t>(n), 1));
  }

  TEST_CASE("no visible labels") {
    AffinityGraph g({{{1, 1.0}}, {{0, 1.0}}});
    CHECK(error_code_of([&] { spread(g, {kHiddenLabel, kHiddenLabel}, {}); }) == ErrorCode::NoVisibleLabels);
  }
}

TEST_SUITE("transduce_full") {
  TEST_CASE("nothing hidden keeps every label") {
    const auto [x, y] = riskdyn::test::two_gaussians(1, 60, 2, 6.0);
    SpreadConfig cfg;
    cfg.hide_fraction = 0.0;
    const auto run = transduce_full(x, y, cfg);
    CHECK(run.result.labels == y);
    CHECK(run.evaluation.hidden_count == 0);
  }

  TEST_CASE("separated Gaussians are recovered") {
    const auto [x, y] = riskdyn::test::two_gaussians(2, 200, 2, 6.0);
    const auto run = transduce_full(x, y, {});
    CHECK(run.evaluation.hidden_count == 100);
    CHECK(run.evaluation.accuracy >= 0.95);
    REQUIRE(run.evaluation.auc.has_value());
    CHECK(*run.evaluation.auc >= 0.95);
    REQUIRE(run.evaluation.confusion.has_value());
    CHECK(run.evaluation.confusion->total() == 100);
  }

  TEST_CASE("serializations carry every row") {
    const auto [x, y] = riskdyn::test::two_gaussians(3, 20, 2, 6.0);
    const auto run = transduce_full(x, y, {});
    std::vector<RowKey> rows;
    for (int i = 0; i < 20; ++i) rows.push_back({"c" + std::to_string(i), 2011});
    const std::string csv = transduction_csv(run, rows, y);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
    CHECK(transduction_json(run, rows, {}).find("\"rows\"") != std::string::npos);
  }
}

#include "json.hpp"

#include "doctest.h"
#include "oracles.hpp"
#include "riskdyn/evaluation.hpp"
#include "support.hpp"

using namespace riskdyn;
using riskdyn::test::error_code_of;

TEST_SUITE("validity_indices") {
  TEST_CASE("coincident clusters far apart score a perfect silhouette") {
    Eigen::MatrixXd p(4, 2);
    p << 0, 0, 0, 0, 50, 50, 50, 50;
    const std::vector<int> labels = {0, 0, 1, 1};
    CHECK(std::abs(silhouette(p, labels) - 1.0) < 1e-12);
    CHECK(calinski_harabasz(p, labels).degenerate);
    CHECK(std::isinf(calinski_harabasz(p, labels).value));
    CHECK(davies_bouldin(p, labels).value == 0.0);
  }

  TEST_CASE("hand-computed four-point Calinski-Harabasz") {
    Eigen::MatrixXd p(4, 1);
    p << 0, 2, 10, 12;
    const std::vector<int> labels = {0, 0, 1, 1};
    // Means 1 and 11, overall 6: B = 2*25 + 2*25 = 100, W = 4, (100/1) / (4/2) = 50.
    CHECK(calinski_harabasz(p, labels).value == doctest::Approx(50.0).epsilon(1e-14));
    // Scatters 1 and 1, centroid distance 10.
    CHECK(davies_bouldin(p, labels).value == doctest::Approx(0.2).epsilon(1e-14));
  }

  TEST_CASE("random instances match the definitional oracles") {
    Rng rng(31);
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 6 + static_cast<int>(rng.below(20));
      const Eigen::MatrixXd p = riskdyn::test::random_matrix(rng, n, 3);
      std::vector<int> labels(static_cast<std::size_t>(n));
      for (int& l : labels) l = static_cast<int>(rng.below(3));
      labels[0] = 0;
      labels[1] = 1;
      CHECK(std::abs(silhouette(p, labels) - oracle::silhouette(p, labels)) < 1e-12);
      const double ch = oracle::calinski_harabasz(p, labels);
      CHECK(std::abs(calinski_harabasz(p, labels).value - ch) <= 1e-12 * std::max(1.0, ch));
      const double db = oracle::davies_bouldin(p, labels);
      CHECK(std::abs(davies_bouldin(p, labels).value - db) <= 1e-12 * std::max(1.0, db));
    }
  }

  TEST_CASE("duplicating every point agrees with the oracle") {
    Rng rng(32);
    const Eigen::MatrixXd p = riskdyn::test::random_matrix(rng, 10, 2);
    Eigen::MatrixXd twice(20, 2);
    twice << p, p;
    std::vector<int> labels = {0, 0, 0, 1, 1, 1, 0, 1, 0, 1};
    std::vector<int> doubled = labels;
    doubled.insert(doubled.end(), labels.begin(), labels.end());
    const double expected = oracle::calinski_harabasz(twice, doubled);
    CHECK(calinski_harabasz(twice, doubled).value == doctest::Approx(expected).epsilon(1e-12));
    // Scatter ratio scales by (2n - k) / (n - k) when every point is duplicated.
    CHECK(expected == doctest::Approx(oracle::calinski_harabasz(p, labels) * 18.0 / 8.0).epsilon(1e-12));
  }

  TEST_CASE("tight distant blobs give Davies-Bouldin near zero") {
    Eigen::MatrixXd p(4, 1);
    p << 0, 0.001, 1000, 1000.001;
    CHECK(davies_bouldin(p, std::vector<int>{0, 0, 1, 1}).value < 1e-5);
  }

  TEST_CASE("errors") {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(3, 1);
    CHECK(error_code_of([&] { silhouette(p, std::vector<int>{0, 0, 0}); }) == ErrorCode::SingleCluster);
    CHECK(error_code_of([&] { silhouette(p, std::vector<int>{0, 1}); }) == ErrorCode::LengthMismatch);
    CHECK(error_code_of([&] { calinski_harabasz(p, std::vector<int>{0, 1, 2}); }) == ErrorCode::InvalidConfig);
  }
}

TEST_SUITE("confusion") {
  TEST_CASE("identical vectors") {
    const std::vector<int> y = {0, 1, 1, 0, 1};
    const auto cm = confusion(y, y);
    CHECK(cm.c01 == 0);
    CHECK(cm.c10 == 0);
    CHECK(cm.accuracy() == 1.0);
  }

  TEST_CASE("counts land in the right cells") {
    const auto cm = confusion(std::vector<int>{0, 0, 1, 1, 1}, std::vector<int>{0, 1, 0, 1, 1});
    CHECK(cm == ConfusionMatrix2{1, 1, 1, 2});
  }

  TEST_CASE("a 164/2/2/215 table") {
    const ConfusionMatrix2 cm{164, 2, 2, 215};
    CHECK(accuracy(cm) == doctest::Approx(379.0 / 383.0).epsilon(1e-15));
  }

  TEST_CASE("all wrong") {
    CHECK(confusion(std::vector<int>{0, 1, 0, 1}, std::vector<int>{1, 0, 1, 0}).accuracy() == 0.0);
  }

  TEST_CASE("errors") {
    CHECK(error_code_of([] { confusion(std::vector<int>{0, 1}, std::vector<int>{0}); }) == ErrorCode::LengthMismatch);
    CHECK(error_code_of([] { confusion(std::vector<int>{0, 2}, std::vector<int>{0, 1}); }) == ErrorCode::NonBinary);
  }
}

TEST_SUITE("auc") {
  TEST_CASE("ordered and all-tied scores") {
    CHECK(auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}) == 1.0);
    CHECK(auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, std::vector<int>{0, 1, 0, 1}) == 0.5);
  }

  TEST_CASE("six-sample tied fixture equals pair counting") {
    const std::vector<double> s = {0.3, 0.7, 0.7, 0.3, 0.9, 0.1};
    const std::vector<int> y = {0, 1, 0, 1, 1, 0};
    CHECK(auc(s, y) == oracle::auc_pairs(s, y));
    // 9 pairs: positives 0.7, 0.3, 0.9 vs negatives 0.3, 0.7, 0.1 -> 7 wins counting ties as halves.
    CHECK(auc(s, y) == 7.0 / 9.0);
  }

  TEST_CASE("one class only") {
    CHECK(error_code_of([] { auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}); }) == ErrorCode::OneClassOnly);
  }
}

TEST_SUITE("metrics_json") {
  TEST_CASE("keys are present, absent values are null") {
    MetricsReport r;
    r.accuracy = 0.5;
    r.confusion = ConfusionMatrix2{1, 2, 3, 4};
    const auto j = nlohmann::json::parse(metrics_json(r));
    for (const char* key : {"silhouette", "calinski_harabasz", "davies_bouldin", "confusion", "accuracy", "auc"}) {
      CHECK(j.contains(key));
    }
    CHECK(j["auc"].is_null());
    CHECK(j["confusion"][1][0] == 3);
  }
}

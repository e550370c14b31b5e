#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "riskdyn/preprocess.hpp"
#include "support.hpp"

using namespace riskdyn;
using riskdyn::test::error_code_of;
using riskdyn::test::make_record;

namespace {

FeatureMatrix matrix_of(const Eigen::MatrixXd& m) {
  FeatureMatrix f;
  f.values = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) f.rows.push_back({"r" + std::to_string(i), 2011});
  for (Eigen::Index j = 0; j < m.cols(); ++j) f.columns.push_back("c" + std::to_string(j));
  return f;
}

}  // namespace

TEST_SUITE("zscore") {
  TEST_CASE("one to five") {
    const std::vector<double> v = {1, 2, 3, 4, 5};
    const auto z = zscore(v);
    CHECK(z[4] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(z[2] == 0.0);
    CHECK(z[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
  }

  TEST_CASE("constant and short inputs") {
    const std::vector<double> c = {7, 7, 7, 7};
    CHECK(error_code_of([&] { zscore(c); }) == ErrorCode::ZeroVariance);
    const std::vector<double> one = {1};
    CHECK(error_code_of([&] { zscore(one); }) == ErrorCode::TooFewValues);
  }

  TEST_CASE("random inputs come out with mean 0 and population stddev 1") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> v(2 + rng.below(60));
      for (double& x : v) x = 100.0 * rng.uniform() - 20.0;
      const auto z = zscore(v);
      double mean = 0.0;
      for (double x : z) mean += x;
      mean /= static_cast<double>(z.size());
      double var = 0.0;
      for (double x : z) var += (x - mean) * (x - mean);
      var /= static_cast<double>(z.size());
      CHECK(std::abs(mean) < 1e-12);
      CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-12);
    }
  }
}

TEST_SUITE("outliers") {
  TEST_CASE("a single injected spike is the only flag") {
    std::vector<CountryYearRecord> rows;
    for (int i = 0; i < 100; ++i) rows.push_back(make_record("C" + std::to_string(i), 2011, 0.0, 1.0));
    rows.push_back(make_record("Spike", 2011, 10.0, 1.0));
    OutlierConfig cfg;
    cfg.variables = {Indicator::Wri};
    const OutlierReport r = detect_outliers(Dataset(rows), cfg);
    REQUIRE(r.flagged.size() == 1);
    CHECK(r.flagged[0].country == "Spike");
    CHECK(r.distinct_countries == std::set<std::string>{"Spike"});
    // Brute force: population z of the spike is 100 / sqrt(100) = 10.
    CHECK(r.flagged[0].zscore == doctest::Approx(std::sqrt(100.0)).epsilon(1e-12));
  }

  TEST_CASE("flags match a brute-force threshold scan on the fixture") {
    const Dataset d = load_dataset(riskdyn::test::fixture_path()).dataset;
    OutlierConfig cfg;
    cfg.threshold = 1.5;
    const OutlierReport r = detect_outliers(d, cfg);
    std::size_t expected = 0;
    for (Indicator v : cfg.variables) {
      double mean = 0.0;
      for (const auto& rec : d.records()) mean += rec.indicator(v);
      mean /= static_cast<double>(d.size());
      double var = 0.0;
      for (const auto& rec : d.records()) var += std::pow(rec.indicator(v) - mean, 2);
      const double sd = std::sqrt(var / static_cast<double>(d.size()));
      for (const auto& rec : d.records()) expected += std::abs((rec.indicator(v) - mean) / sd) > cfg.threshold;
    }
    CHECK(r.flagged.size() == expected);
    std::ostringstream out;
    write_outliers_csv(out, r);
    CHECK(out.str().rfind("country,year,variable,zscore\n", 0) == 0);
  }

  TEST_CASE("identical rows raise ZeroVariance") {
    std::vector<CountryYearRecord> rows;
    for (int i = 0; i < 5; ++i) rows.push_back(make_record("C" + std::to_string(i), 2011, 3.0, 3.0));
    CHECK(error_code_of([&] { detect_outliers(Dataset(rows)); }) == ErrorCode::ZeroVariance);
  }
}

TEST_SUITE("standardize") {
  TEST_CASE("two-point column maps to minus one and one") {
    Eigen::MatrixXd m(2, 1);
    m << 0, 10;
    const auto s = standardize(matrix_of(m));
    CHECK(s.matrix.values(0, 0) == -1.0);
    CHECK(s.matrix.values(1, 0) == 1.0);
  }

  TEST_CASE("stored params reproduce the result bit for bit and invert") {
    Rng rng(3);
    const FeatureMatrix f = matrix_of(riskdyn::test::random_matrix(rng, 20, 6, -5, 50));
    const auto s = standardize(f);
    const FeatureMatrix again = s.params.apply(f);
    CHECK((again.values.array() == s.matrix.values.array()).all());
    CHECK((s.params.inverse(s.matrix).values - f.values).cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index j = 0; j < 6; ++j) CHECK(std::abs(s.matrix.values.col(j).mean()) < 1e-12);
  }

  TEST_CASE("constant column names the column") {
    Eigen::MatrixXd m(3, 2);
    m << 1, 5, 2, 5, 3, 5;
    try {
      standardize(matrix_of(m));
      FAIL("expected ZeroVariance");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ZeroVariance);
      CHECK(std::string(e.what()).find("c1") != std::string::npos);
    }
  }

  TEST_CASE("column subset leaves other columns untouched") {
    Eigen::MatrixXd m(3, 2);
    m << 1, 1, 2, 0, 3, 1;
    const auto s = standardize_columns(matrix_of(m), {0});
    CHECK(s.matrix.values.col(1) == m.col(1));
    CHECK(s.params.mean(1) == 0.0);
    CHECK(s.params.stddev(1) == 1.0);
  }

  TEST_CASE("apply rejects the wrong width") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 1, 2, 3;
    const auto s = standardize(matrix_of(m));
    CHECK(error_code_of([&] { s.params.apply(matrix_of(Eigen::MatrixXd::Zero(2, 3))); }) ==
          ErrorCode::DimensionMismatch);
  }
}

TEST_SUITE("encode_features") {
  TEST_CASE("two regions become two exclusive one-hot columns") {
    auto a = make_record("Fiji", 2011, 1);
    a.region = "Oceania";
    auto b = make_record("Laos", 2011, 2);
    b.region = "Asia";
    EncodingConfig cfg;
    cfg.include_categories = false;
    const FeatureEncoder enc = FeatureEncoder::fit(Dataset({a, b}), cfg);
    const FeatureMatrix m = enc.transform(Dataset({a, b}));
    REQUIRE(enc.groups().size() == 1);
    const auto [begin, end] = enc.groups()[0].second;
    CHECK(end - begin == 2);
    CHECK(m.columns[static_cast<std::size_t>(begin)] == "Region=Asia");
    CHECK(m.values.block(0, begin, 2, 2).rowwise().sum().isOnes());
    CHECK(m.values(0, begin) != m.values(1, begin));
  }

  TEST_CASE("fixture one-hot groups partition every row and sort values") {
    const Dataset d = load_dataset(riskdyn::test::fixture_path()).dataset;
    const FeatureEncoder enc = FeatureEncoder::fit(d);
    const FeatureMatrix m = enc.transform(d);
    CHECK(enc.numeric_columns().size() == 7);
    CHECK(enc.groups().size() == 5);
    for (const auto& [name, range] : enc.groups()) {
      const auto width = range.second - range.first;
      CHECK(m.values.middleCols(range.first, width).rowwise().sum().isOnes());
      for (auto c = range.first + 1; c < range.second; ++c) {
        CHECK(m.columns[static_cast<std::size_t>(c - 1)] < m.columns[static_cast<std::size_t>(c)]);
      }
    }
  }

  TEST_CASE("three WRI categories give three sorted columns") {
    std::vector<CountryYearRecord> rows;
    const char* cats[] = {"Medium", "High", "Low", "High"};
    for (int i = 0; i < 4; ++i) {
      auto r = make_record("C" + std::to_string(i), 2011, i);
      r.wri_cat = cats[i];
      rows.push_back(r);
    }
    const FeatureEncoder enc = FeatureEncoder::fit(Dataset(rows));
    std::vector<std::string> wri;
    for (const auto& c : enc.columns()) {
      if (c.rfind("WRI Category=", 0) == 0) wri.push_back(c);
    }
    CHECK(wri == std::vector<std::string>{"WRI Category=High", "WRI Category=Low", "WRI Category=Medium"});
  }

  TEST_CASE("unseen categories encode as zeros, or fail in strict mode") {
    auto a = make_record("A", 2011, 1);
    auto b = make_record("B", 2011, 2);
    b.region = "Elsewhere";
    EncodingConfig cfg;
    cfg.include_categories = false;
    const FeatureEncoder enc = FeatureEncoder::fit(Dataset({a}), cfg);
    const FeatureMatrix m = enc.transform(Dataset({b}));
    const auto [begin, end] = enc.groups()[0].second;
    CHECK(m.values.block(0, begin, 1, end - begin).isZero());
    cfg.strict = true;
    const FeatureEncoder strict = FeatureEncoder::fit(Dataset({a}), cfg);
    CHECK(error_code_of([&] { strict.transform(Dataset({b})); }) == ErrorCode::UnknownCategory);
  }
}

TEST_SUITE("pca") {
  TEST_CASE("collinear points give one component with all variance") {
    Eigen::MatrixXd m(5, 2);
    for (int i = 0; i < 5; ++i) m.row(i) << i, 2.0 * i;
    const PcaModel p = pca_fit(matrix_of(m), 1);
    CHECK(p.explained_variance_ratio()(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.components(0, 1) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-12));
    CHECK(error_code_of([&] { pca_fit(matrix_of(m), 2); }) == ErrorCode::RankDeficient);
  }

  TEST_CASE("full-rank round trip") {
    Rng rng(5);
    const FeatureMatrix f = matrix_of(riskdyn::test::random_matrix(rng, 10, 4));
    const PcaModel p = pca_fit(f, 4);
    const FeatureMatrix back = pca_inverse_transform(p, pca_transform(p, f));
    CHECK((back.values - f.values).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((p.components * p.components.transpose() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("subspace matches a covariance eigen-decomposition") {
    Eigen::MatrixXd m(5, 3);
    m << 2.5, 2.4, 0.5, 0.5, 0.7, 1.9, 2.2, 2.9, 0.4, 1.9, 2.2, 1.1, 3.1, 3.0, 0.2;
    const PcaModel p = pca_fit(matrix_of(m), 2);
    const Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / 5.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    // Eigenvalues ascend; the top two eigenvectors span the oracle subspace.
    const Eigen::MatrixXd oracle = es.eigenvectors().rightCols(2);
    const Eigen::MatrixXd ours = p.components.transpose();
    // Sines of the principal angles are the singular values of (I - O O^T) U.
    const Eigen::MatrixXd residual = ours - oracle * (oracle.transpose() * ours);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual);
    for (Eigen::Index i = 0; i < 2; ++i) CHECK(std::asin(std::min(1.0, svd.singularValues()(i))) < 1e-8);
    CHECK(p.explained_variance(0) == doctest::Approx(es.eigenvalues()(2)).epsilon(1e-12));
    CHECK(p.explained_variance(1) == doctest::Approx(es.eigenvalues()(1)).epsilon(1e-12));
  }

  TEST_CASE("component count outside the valid range") {
    Rng rng(1);
    const FeatureMatrix f = matrix_of(riskdyn::test::random_matrix(rng, 4, 3));
    CHECK(error_code_of([&] { pca_fit(f, 0); }) == ErrorCode::InvalidConfig);
    CHECK(error_code_of([&] { pca_fit(f, 4); }) == ErrorCode::InvalidConfig);
  }
}

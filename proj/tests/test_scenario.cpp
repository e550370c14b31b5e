#include "doctest.h"
#include "riskdyn/scenario.hpp"
#include "support.hpp"

using namespace riskdyn;
using riskdyn::test::error_code_of;
using riskdyn::test::make_record;

TEST_SUITE("transition_probability") {
  TEST_CASE("three of ten migrate") {
    std::vector<Migration> m;
    for (int i = 0; i < 10; ++i) m.push_back({"c" + std::to_string(i), 0, i < 3 ? 1 : 0});
    const auto shift = transition_probability(m, 0, 1);
    CHECK(shift.probability == 0.3);
    CHECK(shift.migrated == 3);
    CHECK(shift.total == 10);
    CHECK(transition_probability(m, 0, 0).probability == 0.7);
  }

  TEST_CASE("identity trajectories") {
    const std::vector<Migration> m = {{"a", 0, 0}, {"b", 1, 1}, {"c", 1, 1}};
    CHECK(transition_probability(m, 0, 0).probability == 1.0);
    CHECK(transition_probability(m, 1, 0).probability == 0.0);
    const auto t = transition_matrix(m, 2);
    CHECK(t.probability.isIdentity());
    CHECK(t.totals == std::vector<long>{1, 2});
  }

  TEST_CASE("empty source cluster") {
    CHECK(error_code_of([] { transition_probability({{"a", 0, 0}}, 1, 0); }) == ErrorCode::EmptySourceCluster);
  }

  TEST_CASE("uniform random destinations give rows near one half") {
    Rng rng(99);
    std::vector<Migration> m;
    for (int i = 0; i < 10000; ++i) {
      m.push_back({"c" + std::to_string(i), static_cast<int>(rng.below(2)), static_cast<int>(rng.below(2))});
    }
    const auto t = transition_matrix(m, 2);
    for (int r = 0; r < 2; ++r) {
      // 4 binomial standard deviations at n ~ 5000.
      CHECK(std::abs(t.probability(r, 0) - 0.5) < 4.0 * 0.5 / std::sqrt(static_cast<double>(t.totals[r])));
      CHECK(std::abs(t.probability.row(r).sum() - 1.0) < 1e-12);
    }
  }
}

TEST_SUITE("trajectories") {
  TEST_CASE("one country over eleven years") {
    std::vector<CountryYearRecord> rows;
    LabelTable labels;
    for (int y = 2011; y <= 2021; ++y) {
      rows.push_back(make_record("Solo", y, 1));
      labels[{"Solo", y}] = y % 2;
    }
    const auto t = country_trajectories(Dataset(rows), labels);
    REQUIRE(t.size() == 1);
    CHECK(t[0].points.size() == 11);
    CHECK(t[0].points.front() == std::pair<int, int>{2011, 1});
  }

  TEST_CASE("a missing year raises MissingAssignment") {
    const Dataset d({make_record("A", 2011, 1), make_record("A", 2012, 1)});
    CHECK(error_code_of([&] { country_trajectories(d, {{{"A", 2011}, 0}}); }) == ErrorCode::MissingAssignment);
  }
}

TEST_SUITE("transition_report") {
  TEST_CASE("terminal year, per-year breakdown and exclusions") {
    ScenarioInput in;
    in.horizon = Horizon::Three;
    in.anchor_year = 2017;
    in.start_clusters = {{"A", 0}, {"B", 0}, {"C", 1}, {"D", 1}};
    for (int y = 2018; y <= 2021; ++y) {
      in.predictions.push_back({{"A", y}, 0});
      in.predictions.push_back({{"B", y}, y == 2021 ? 1 : 0});
      in.predictions.push_back({{"C", y}, 1});
    }
    in.predictions.push_back({{"E", 2021}, 0});
    const TransitionReport r = build_transition_report({in}, 2);
    REQUIRE(r.horizons.size() == 1);
    const auto& h = r.horizons[0];
    CHECK(h.terminal_year == 2021);
    CHECK(h.terminal.probability(0, 1) == 0.5);
    CHECK(h.terminal.probability(1, 1) == 1.0);
    CHECK(h.per_year.size() == 4);
    CHECK(h.per_year.at(2018).probability(0, 0) == 1.0);
    CHECK(h.excluded == std::vector<std::string>{"D", "E"});
    const std::string csv = transition_csv(r);
    CHECK(csv.rfind("horizon,from,to,probability,migrated,total\n", 0) == 0);
    CHECK(csv.find("three,0,1,0.500000,1,2\n") != std::string::npos);
  }
}

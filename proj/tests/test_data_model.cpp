#include <sstream>

#include "doctest.h"
#include "riskdyn/csv.hpp"
#include "riskdyn/data_model.hpp"
#include "support.hpp"

using namespace riskdyn;
using riskdyn::test::error_code_of;
using riskdyn::test::make_record;

namespace {

const char* kHeader =
    "Region,WRI,Exposure,Vulnerability,Susceptibility,Lack of Coping Capabilities,"
    "Lack of Adaptive Capacities,Year,Exposure Category,WRI Category,Vulnerability Category,"
    "Susceptibility Category\n";

Dataset panel(int first, int last, int countries) {
  std::vector<CountryYearRecord> rows;
  for (int c = 0; c < countries; ++c) {
    for (int y = first; y <= last; ++y) rows.push_back(make_record("C" + std::to_string(c), y, c + y * 0.01));
  }
  return Dataset(std::move(rows));
}

}  // namespace

TEST_SUITE("csv") {
  TEST_CASE("quoted fields, doubled quotes, CRLF and embedded newlines") {
    std::istringstream in("a,b,c\r\n\"x, y\",\"he said \"\"hi\"\"\",\"two\nlines\"\r\n1,2,3\n");
    const auto t = csv::read(in);
    REQUIRE(t.header == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][0] == "x, y");
    CHECK(t.rows[0][1] == "he said \"hi\"");
    CHECK(t.rows[0][2] == "two\nlines");
    CHECK(t.line_numbers[0] == 2);
    CHECK(t.line_numbers[1] == 4);
  }

  TEST_CASE("escape round-trips through the reader") {
    const std::vector<std::string> fields = {"plain", "com,ma", "quo\"te", ""};
    std::istringstream in(csv::join_row(fields) + "\n" + csv::join_row(fields) + "\n");
    const auto t = csv::read(in);
    CHECK(t.header == fields);
    CHECK(t.rows.at(0) == fields);
  }

  TEST_CASE("number parsing is strict") {
    double d = 0.0;
    int i = 0;
    CHECK(csv::parse_double("1.5", d));
    CHECK(d == 1.5);
    CHECK(csv::parse_double("+2", d));
    CHECK_FALSE(csv::parse_double("", d));
    CHECK_FALSE(csv::parse_double("1.5x", d));
    CHECK_FALSE(csv::parse_double("abc", d));
    CHECK(csv::parse_int("2011", i));
    CHECK(i == 2011);
    CHECK(csv::parse_int("2012.0", i));
    CHECK(i == 2012);
    CHECK_FALSE(csv::parse_int("2012.5", i));
  }

  TEST_CASE("formatting is locale independent and normalizes negative zero") {
    CHECK(csv::format_fixed(1.23456, 3) == "1.235");
    CHECK(csv::format_fixed(-0.0001, 2) == "0.00");
    CHECK(csv::format_roundtrip(0.1) == "0.1");
    double back = 0.0;
    REQUIRE(csv::parse_double(csv::format_roundtrip(1.0 / 3.0), back));
    CHECK(back == 1.0 / 3.0);
  }
}

TEST_SUITE("data_model") {
  TEST_CASE("record features come back in declared order") {
    const auto r = make_record("X", 2011, 15.5, 1, 2, 3, 4, 5);
    const auto f = record_features(r);
    CHECK(f.size() == 6);
    CHECK(f == std::array<double, 6>{15.5, 1, 2, 3, 4, 5});
    CHECK(record_features(make_record("Z", 2011, 0, 0, 0, 0, 0, 0)) == std::array<double, 6>{});
    for (std::size_t i = 0; i < kIndicators.size(); ++i) CHECK(r.indicator(kIndicators[i]) == f[i]);
  }

  TEST_CASE("indicator names parse from display names and keys") {
    for (Indicator ind : kIndicators) CHECK(parse_indicator(indicator_name(ind)) == ind);
    CHECK(parse_indicator("lack_coping") == Indicator::LackCoping);
    CHECK_FALSE(parse_indicator("GDP").has_value());
  }

  TEST_CASE("three-row CSV with a missing WRI value yields two records and one rejection") {
    std::istringstream in(std::string(kHeader) +
                          "Aland,5.1,3,4,5,6,7,2011,Low,Low,Low,Low\n"
                          "Aland,,3,4,5,6,7,2012,Low,Low,Low,Low\n"
                          "Borov,6.2,3,4,5,6,7,2011,Low,Low,Low,Low\n");
    const LoadResult r = load_dataset(in);
    CHECK(r.dataset.size() == 2);
    REQUIRE(r.rejected.size() == 1);
    CHECK(r.rejected[0].line == 3);
    CHECK(r.rejected[0].reason.find("WRI") != std::string::npos);
  }

  TEST_CASE("rows with bad years or negative values are rejected") {
    std::istringstream in(std::string(kHeader) +
                          "Aland,5.1,3,4,5,6,7,2009,Low,Low,Low,Low\n"
                          "Aland,5.1,3,4,5,6,7,abc,Low,Low,Low,Low\n"
                          "Aland,5.1,-3,4,5,6,7,2012,Low,Low,Low,Low\n"
                          ",5.1,3,4,5,6,7,2012,Low,Low,Low,Low\n"
                          "Aland,5.1,3,4,5,6,7,2013,Low,Low,Low,Low\n");
    const LoadResult r = load_dataset(in);
    CHECK(r.dataset.size() == 1);
    CHECK(r.rejected.size() == 4);
  }

  TEST_CASE("load errors") {
    std::istringstream header_only(kHeader);
    CHECK(error_code_of([&] { load_dataset(header_only); }) == ErrorCode::EmptyDataset);
    std::istringstream empty("");
    CHECK(error_code_of([&] { load_dataset(empty); }) == ErrorCode::EmptyDataset);
    std::istringstream missing("Region,WRI,Year\nA,1,2011\n");
    CHECK(error_code_of([&] { load_dataset(missing); }) == ErrorCode::MissingColumn);
    CHECK(error_code_of([] { load_dataset(std::filesystem::path("/nonexistent/wri.csv")); }) ==
          ErrorCode::MissingFile);
    std::istringstream dup(std::string(kHeader) + "A,1,1,1,1,1,1,2011,L,L,L,L\nA,2,1,1,1,1,1,2011,L,L,L,L\n");
    CHECK(error_code_of([&] { load_dataset(dup); }) == ErrorCode::DuplicateKey);
  }

  TEST_CASE("write then load reproduces the dataset") {
    const Dataset original = load_dataset(riskdyn::test::fixture_path()).dataset;
    std::ostringstream out;
    write_dataset_csv(out, original);
    std::istringstream in(out.str());
    const Dataset again = load_dataset(in).dataset;
    REQUIRE(again.size() == original.size());
    for (std::size_t i = 0; i < original.size(); ++i) CHECK(again[i] == original[i]);
  }

  TEST_CASE("the bundled fixture covers 20 countries over 11 years") {
    const Dataset d = load_dataset(riskdyn::test::fixture_path()).dataset;
    CHECK(d.countries().size() == 20);
    CHECK(d.years().size() == 11);
    CHECK(d.size() == 220);
  }

  TEST_CASE("dataset is sorted by country then year") {
    const Dataset d({make_record("B", 2012, 1), make_record("A", 2013, 1), make_record("B", 2011, 1),
                     make_record("A", 2011, 1)});
    const auto keys = d.keys();
    CHECK(std::is_sorted(keys.begin(), keys.end()));
    CHECK(d.years() == std::vector<int>{2011, 2012, 2013});
    CHECK(d.countries() == std::vector<std::string>{"A", "B"});
  }
}

namespace {

SplitSpec spec_for(Horizon h) {
  SplitSpec s;
  s.horizon = h;
  return s;
}

}  // namespace

TEST_SUITE("temporal_split") {
  TEST_CASE("one-year split tests exactly the final year") {
    const auto s = temporal_split(panel(2011, 2021, 3), spec_for(Horizon::One));
    CHECK(s.test.years() == std::vector<int>{2021});
    CHECK(s.test.size() == 3);
    CHECK(s.train.years().back() == 2020);
  }

  TEST_CASE("three-year split tests the last four years") {
    const auto s = temporal_split(panel(2011, 2021, 2), spec_for(Horizon::Three));
    CHECK(s.test.years() == std::vector<int>{2018, 2019, 2020, 2021});
    CHECK(s.train.years().back() == 2017);
  }

  TEST_CASE("five-year split is disjoint; the overlapping variant is not") {
    const auto s = temporal_split(panel(2011, 2021, 2), spec_for(Horizon::Five));
    CHECK(s.test.years().front() == 2016);
    CHECK(s.train.years().back() == 2015);
    SplitSpec overlap = spec_for(Horizon::Five);
    overlap.overlapping_five_year = true;
    const auto o = temporal_split(panel(2011, 2021, 2), overlap);
    CHECK(o.test.years().front() == 2016);
    CHECK(o.train.years().back() == 2017);
  }

  TEST_CASE("an explicit final year anchors the test period") {
    SplitSpec spec = spec_for(Horizon::One);
    spec.final_year = 2019;
    const auto s = temporal_split(panel(2011, 2021, 2), spec);
    CHECK(s.test.years() == std::vector<int>{2019});
    CHECK(s.train.years().back() == 2018);
  }

  TEST_CASE("splits without train rows raise EmptySplit") {
    CHECK(error_code_of([] { temporal_split(panel(2021, 2021, 3), spec_for(Horizon::One)); }) == ErrorCode::EmptySplit);
    CHECK(error_code_of([] { temporal_split(panel(2018, 2021, 3), spec_for(Horizon::Five)); }) == ErrorCode::EmptySplit);
  }

  TEST_CASE("horizon names") {
    for (Horizon h : kHorizons) CHECK(parse_horizon(horizon_name(h)) == h);
    CHECK(parse_horizon("3") == Horizon::Three);
    CHECK_FALSE(parse_horizon("2").has_value());
  }
}

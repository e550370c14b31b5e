#include "riskdyn/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include "riskdyn/csv.hpp"
#include "riskdyn/error.hpp"

namespace riskdyn {

std::string_view indicator_name(Indicator indicator) noexcept {
  switch (indicator) {
    case Indicator::Wri: return "WRI";
    case Indicator::Exposure: return "Exposure";
    case Indicator::Vulnerability: return "Vulnerability";
    case Indicator::Susceptibility: return "Susceptibility";
    case Indicator::LackCoping: return "Lack of Coping Capabilities";
    case Indicator::LackAdaptive: return "Lack of Adaptive Capacities";
  }
  return "";
}

std::optional<Indicator> parse_indicator(std::string_view text) {
  static const std::map<std::string, Indicator, std::less<>> kKeys = {
      {"wri", Indicator::Wri},
      {"exposure", Indicator::Exposure},
      {"vulnerability", Indicator::Vulnerability},
      {"susceptibility", Indicator::Susceptibility},
      {"lack_coping", Indicator::LackCoping},
      {"lack_adaptive", Indicator::LackAdaptive},
  };
  for (Indicator ind : kIndicators) {
    if (indicator_name(ind) == text) return ind;
  }
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (auto it = kKeys.find(lower); it != kKeys.end()) return it->second;
  return std::nullopt;
}

double CountryYearRecord::indicator(Indicator which) const noexcept {
  switch (which) {
    case Indicator::Wri: return wri;
    case Indicator::Exposure: return exposure;
    case Indicator::Vulnerability: return vulnerability;
    case Indicator::Susceptibility: return susceptibility;
    case Indicator::LackCoping: return lack_coping;
    case Indicator::LackAdaptive: return lack_adaptive;
  }
  return 0.0;
}

std::array<double, 6> record_features(const CountryYearRecord& r) noexcept {
  return {r.wri, r.exposure, r.vulnerability, r.susceptibility, r.lack_coping, r.lack_adaptive};
}

Dataset::Dataset(std::vector<CountryYearRecord> records) : records_(std::move(records)) {
  std::stable_sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.country, a.year) < std::tie(b.country, b.year);
  });
  for (std::size_t i = 1; i < records_.size(); ++i) {
    if (records_[i].country == records_[i - 1].country && records_[i].year == records_[i - 1].year) {
      throw Error(ErrorCode::DuplicateKey,
                  "(" + records_[i].country + ", " + std::to_string(records_[i].year) + ")");
    }
  }
  for (const auto& r : records_) {
    years_.push_back(r.year);
    if (countries_.empty() || countries_.back() != r.country) countries_.push_back(r.country);
  }
  std::sort(years_.begin(), years_.end());
  years_.erase(std::unique(years_.begin(), years_.end()), years_.end());
}

std::vector<RowKey> Dataset::keys() const {
  std::vector<RowKey> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back({r.country, r.year});
  return out;
}

Dataset Dataset::filter(const std::function<bool(const CountryYearRecord&)>& keep) const {
  std::vector<CountryYearRecord> kept;
  std::copy_if(records_.begin(), records_.end(), std::back_inserter(kept), keep);
  return Dataset(std::move(kept));
}

namespace {

struct ColumnIndex {
  std::size_t country, region, year;
  std::array<std::size_t, 6> numeric;
  std::array<std::size_t, 4> categories;  // exposure, wri, vulnerability, susceptibility
};

std::size_t find_column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (csv::trim(header[i]) == name) return i;
  }
  throw Error(ErrorCode::MissingColumn, name);
}

ColumnIndex resolve(const std::vector<std::string>& header, const ColumnMap& c) {
  ColumnIndex idx{};
  idx.country = find_column(header, c.country);
  idx.region = find_column(header, c.region);
  idx.year = find_column(header, c.year);
  const std::array<const std::string*, 6> numeric = {&c.wri, &c.exposure, &c.vulnerability,
                                                     &c.susceptibility, &c.lack_coping, &c.lack_adaptive};
  for (std::size_t i = 0; i < numeric.size(); ++i) idx.numeric[i] = find_column(header, *numeric[i]);
  const std::array<const std::string*, 4> cats = {&c.exposure_cat, &c.wri_cat, &c.vulnerability_cat,
                                                  &c.susceptibility_cat};
  for (std::size_t i = 0; i < cats.size(); ++i) idx.categories[i] = find_column(header, *cats[i]);
  return idx;
}

const char* kNumericNames[6] = {"WRI", "Exposure", "Vulnerability", "Susceptibility",
                                "Lack of Coping Capabilities", "Lack of Adaptive Capacities"};

}  // namespace

LoadResult load_dataset(std::istream& in, const SchemaConfig& schema) {
  const csv::Table table = csv::read(in);
  if (table.header.empty()) throw Error(ErrorCode::EmptyDataset, "no header row");
  const ColumnIndex idx = resolve(table.header, schema.columns);

  LoadResult result;
  std::vector<CountryYearRecord> records;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    auto field = [&](std::size_t col) -> std::string {
      return col < row.size() ? csv::trim(row[col]) : std::string{};
    };
    auto reject = [&](std::string reason) { result.rejected.push_back({line, std::move(reason)}); };

    CountryYearRecord rec;
    rec.country = field(idx.country);
    rec.region = field(idx.region);
    if (rec.country.empty()) {
      reject("empty country");
      continue;
    }
    if (!csv::parse_int(field(idx.year), rec.year)) {
      reject("invalid year '" + field(idx.year) + "'");
      continue;
    }
    if (rec.year < schema.min_year || rec.year > schema.max_year) {
      reject("year " + std::to_string(rec.year) + " outside [" + std::to_string(schema.min_year) + ", " +
             std::to_string(schema.max_year) + "]");
      continue;
    }
    std::array<double, 6> values{};
    bool ok = true;
    for (std::size_t i = 0; i < 6 && ok; ++i) {
      const std::string text = field(idx.numeric[i]);
      if (!csv::parse_double(text, values[i])) {
        reject(std::string("missing or non-numeric ") + kNumericNames[i] + " '" + text + "'");
        ok = false;
      } else if (!std::isfinite(values[i]) || values[i] < 0.0) {
        reject(std::string("non-finite or negative ") + kNumericNames[i] + " '" + text + "'");
        ok = false;
      }
    }
    if (!ok) continue;
    rec.wri = values[0];
    rec.exposure = values[1];
    rec.vulnerability = values[2];
    rec.susceptibility = values[3];
    rec.lack_coping = values[4];
    rec.lack_adaptive = values[5];
    rec.exposure_cat = field(idx.categories[0]);
    rec.wri_cat = field(idx.categories[1]);
    rec.vulnerability_cat = field(idx.categories[2]);
    rec.susceptibility_cat = field(idx.categories[3]);
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, "no valid rows");
  result.dataset = Dataset(std::move(records));
  return result;
}

LoadResult load_dataset(const std::filesystem::path& path, const SchemaConfig& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  return load_dataset(in, schema);
}

void write_dataset_csv(std::ostream& out, const Dataset& dataset, const ColumnMap& c) {
  const bool shared = c.country == c.region;
  std::vector<std::string> header;
  header.push_back(c.country);
  if (!shared) header.push_back(c.region);
  for (const auto* name : {&c.wri, &c.exposure, &c.vulnerability, &c.susceptibility, &c.lack_coping,
                           &c.lack_adaptive, &c.year, &c.exposure_cat, &c.wri_cat, &c.vulnerability_cat,
                           &c.susceptibility_cat}) {
    header.push_back(*name);
  }
  out << csv::join_row(header) << '\n';
  for (const auto& r : dataset.records()) {
    std::vector<std::string> row;
    row.push_back(r.country);
    if (!shared) row.push_back(r.region);
    for (double v : record_features(r)) row.push_back(csv::format_roundtrip(v));
    row.push_back(std::to_string(r.year));
    row.push_back(r.exposure_cat);
    row.push_back(r.wri_cat);
    row.push_back(r.vulnerability_cat);
    row.push_back(r.susceptibility_cat);
    out << csv::join_row(row) << '\n';
  }
}

std::string_view horizon_name(Horizon horizon) noexcept {
  switch (horizon) {
    case Horizon::One: return "one";
    case Horizon::Three: return "three";
    case Horizon::Five: return "five";
  }
  return "";
}

int horizon_years(Horizon horizon) noexcept { return static_cast<int>(horizon); }

std::optional<Horizon> parse_horizon(std::string_view text) {
  if (text == "1" || text == "one") return Horizon::One;
  if (text == "3" || text == "three") return Horizon::Three;
  if (text == "5" || text == "five") return Horizon::Five;
  return std::nullopt;
}

SplitSpec::Bounds SplitSpec::bounds(int anchor) const noexcept {
  switch (horizon) {
    case Horizon::One: return {anchor, anchor};
    case Horizon::Three: return {anchor - 3, anchor - 3};
    case Horizon::Five:
      if (overlapping_five_year) return {anchor - 3, anchor - 5};
      return {anchor - 5, anchor - 5};
  }
  return {anchor, anchor};
}

Split temporal_split(const Dataset& dataset, const SplitSpec& spec) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");
  const int anchor = spec.final_year.value_or(dataset.years().back());
  const auto b = spec.bounds(anchor);
  Split split{dataset.filter([&](const auto& r) { return r.year < b.train_end; }),
              dataset.filter([&](const auto& r) { return r.year >= b.test_begin && r.year <= anchor; })};
  const std::string label = "horizon " + std::string(horizon_name(spec.horizon));
  if (split.train.empty()) throw Error(ErrorCode::EmptySplit, label + ": no training rows");
  if (split.test.empty()) throw Error(ErrorCode::EmptySplit, label + ": no test rows");
  return split;
}

}  // namespace riskdyn

#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace riskdyn {

// The six numeric risk indicators, in feature order.
enum class Indicator { Wri, Exposure, Vulnerability, Susceptibility, LackCoping, LackAdaptive };

inline constexpr std::array<Indicator, 6> kIndicators = {
    Indicator::Wri,         Indicator::Exposure,   Indicator::Vulnerability,
    Indicator::Susceptibility, Indicator::LackCoping, Indicator::LackAdaptive};

std::string_view indicator_name(Indicator indicator) noexcept;
/// Accepts the display name ("Lack of Coping Capabilities") or a short key ("lack_coping").
std::optional<Indicator> parse_indicator(std::string_view text);

struct CountryYearRecord {
  std::string country;
  std::string region;
  int year = 0;
  double wri = 0.0;
  double exposure = 0.0;
  double vulnerability = 0.0;
  double susceptibility = 0.0;
  double lack_coping = 0.0;
  double lack_adaptive = 0.0;
  std::string exposure_cat;
  std::string wri_cat;
  std::string vulnerability_cat;
  std::string susceptibility_cat;

  double indicator(Indicator which) const noexcept;

  friend bool operator==(const CountryYearRecord&, const CountryYearRecord&) = default;
};

/// (wri, exposure, vulnerability, susceptibility, lack_coping, lack_adaptive)
std::array<double, 6> record_features(const CountryYearRecord& record) noexcept;

struct RowKey {
  std::string country;
  int year = 0;

  friend auto operator<=>(const RowKey&, const RowKey&) = default;
};

// Immutable panel of country-year records, sorted by (country, year).
class Dataset {
 public:
  Dataset() = default;
  /// Sorts the records; throws DuplicateKey on a repeated (country, year).
  explicit Dataset(std::vector<CountryYearRecord> records);

  const std::vector<CountryYearRecord>& records() const noexcept { return records_; }
  const std::vector<int>& years() const noexcept { return years_; }
  const std::vector<std::string>& countries() const noexcept { return countries_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const CountryYearRecord& operator[](std::size_t i) const { return records_[i]; }

  std::vector<RowKey> keys() const;
  Dataset filter(const std::function<bool(const CountryYearRecord&)>& keep) const;

 private:
  std::vector<CountryYearRecord> records_;
  std::vector<int> years_;
  std::vector<std::string> countries_;
};

// Header names for each field. The public export stores the country name in
// "Region", so by default both country and region read that column.
struct ColumnMap {
  std::string country = "Region";
  std::string region = "Region";
  std::string wri = "WRI";
  std::string exposure = "Exposure";
  std::string vulnerability = "Vulnerability";
  std::string susceptibility = "Susceptibility";
  std::string lack_coping = "Lack of Coping Capabilities";
  std::string lack_adaptive = "Lack of Adaptive Capacities";
  std::string year = "Year";
  std::string exposure_cat = "Exposure Category";
  std::string wri_cat = "WRI Category";
  std::string vulnerability_cat = "Vulnerability Category";
  std::string susceptibility_cat = "Susceptibility Category";
};

struct SchemaConfig {
  ColumnMap columns;
  int min_year = 2011;
  int max_year = 2021;
};

struct Rejection {
  std::size_t line = 0;  // 1-based line in the source file
  std::string reason;
};

struct LoadResult {
  Dataset dataset;
  std::vector<Rejection> rejected;
};

/// Parses and validates a panel CSV. Invalid rows go to the rejection report.
/// Throws MissingFile, MissingColumn, EmptyDataset, DuplicateKey.
LoadResult load_dataset(const std::filesystem::path& path, const SchemaConfig& schema = {});
LoadResult load_dataset(std::istream& in, const SchemaConfig& schema = {});

/// Writes the dataset with the given headers. When country and region map to
/// the same header a single column is written.
void write_dataset_csv(std::ostream& out, const Dataset& dataset, const ColumnMap& columns = {});

enum class Horizon { One = 1, Three = 3, Five = 5 };

inline constexpr std::array<Horizon, 3> kHorizons = {Horizon::One, Horizon::Three, Horizon::Five};

std::string_view horizon_name(Horizon horizon) noexcept;
int horizon_years(Horizon horizon) noexcept;
std::optional<Horizon> parse_horizon(std::string_view text);

struct SplitSpec {
  Horizon horizon = Horizon::One;
  // Anchor year of the final test period; defaults to the latest year in the dataset.
  std::optional<int> final_year;
  // Five-year variant with train < final-3 and test >= final-5. Train and test
  // overlap in this mode.
  bool overlapping_five_year = false;

  struct Bounds {
    int train_end;   // train: year < train_end
    int test_begin;  // test: year >= test_begin
  };
  Bounds bounds(int anchor_year) const noexcept;
};

struct Split {
  Dataset train;
  Dataset test;
};

/// Throws EmptySplit when either side has no records.
Split temporal_split(const Dataset& dataset, const SplitSpec& spec);

}  // namespace riskdyn
